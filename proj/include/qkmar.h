/* Copyright 2026 The qkmar authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the qkmar shared library: quantum and classical kernel
 * pipelines for SAR chip classification. All functions return QKM_OK on
 * success or an error status; qkm_last_error() / qkm_last_error_stage()
 * describe the most recent failure on the calling thread. Strings returned
 * through char** are owned by the caller and released with qkm_string_free().
 */

#ifndef QKMAR_H
#define QKMAR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QKMAR_API __declspec(dllexport)
#else
#define QKMAR_API __attribute__((visibility("default")))
#endif

typedef enum qkm_status {
    QKM_OK = 0,
    QKM_ERROR_CONFIG = 2,
    QKM_ERROR_DATA = 3,
    QKM_ERROR_NUMERIC = 4
} qkm_status;

/* Library version string, e.g. "0.1.0". */
QKMAR_API const char* qkm_version(void);

/* Message and pipeline stage of the last error on this thread; empty strings
 * when no error has occurred. */
QKMAR_API const char* qkm_last_error(void);
QKMAR_API const char* qkm_last_error_stage(void);

QKMAR_API void qkm_string_free(char* text);

/* Writes a synthetic SARC dataset (chips + manifest.csv) described by a
 * synthetic-spec JSON document into out_dir. */
QKMAR_API qkm_status qkm_synth(const char* spec_json, const char* out_dir);

/* Runs the full experiment described by a config JSON document: ingest,
 * confidence filter, balanced sampling, h-transform, stratified split,
 * cross-validated grid search, retraining, and test evaluation. Writes
 * report.json, cv_results.csv, and model.json into the config's output_dir.
 * workers <= 0 selects the hardware concurrency. report_json_out may be NULL;
 * otherwise it receives the report document. */
QKMAR_API qkm_status qkm_run(const char* config_json, int workers, char** report_json_out);

/* Builds the preprocessed training Gram matrix for a config whose grid pins
 * every axis to a single value and writes it as a QKGM file. */
QKMAR_API qkm_status qkm_kernel_matrix(const char* config_json, const char* out_path,
                                       int workers);

/* Renders a run-report JSON document as human-readable text. */
QKMAR_API qkm_status qkm_render_report(const char* report_json, char** text_out);

/* Default cross-validation grid for a kernel ("linear", "rbf", "laplacian",
 * "ry1dst", "ryrz1dalt", "cryrz1dst") as a JSON document. */
QKMAR_API qkm_status qkm_default_grid(const char* kernel, char** grid_json_out);

/* Evaluates one kernel value. The kernel-spec JSON matches the QKGM header
 * spec, e.g. {"family":"rbf","gamma":0.1} or
 * {"family":"quantum","encoding":{"family":"ry1dst","qubits":2,"layers":2,
 * "bandwidth":0.5}}. x_im/y_im may be NULL for real features. */
QKMAR_API qkm_status qkm_kernel_value(const char* kernel_spec_json, const double* x_re,
                                      const double* x_im, const double* y_re, const double* y_im,
                                      int32_t dim, double* value_out);

/* Opaque handle over a Gram matrix loaded from a QKGM file. */
typedef struct qkm_gram qkm_gram;

QKMAR_API qkm_status qkm_gram_load(const char* path, qkm_gram** gram_out);
QKMAR_API void qkm_gram_free(qkm_gram* gram);
QKMAR_API int32_t qkm_gram_rows(const qkm_gram* gram);
QKMAR_API int32_t qkm_gram_cols(const qkm_gram* gram);
/* Entry (row, col); returns NaN on out-of-range indices. */
QKMAR_API double qkm_gram_value(const qkm_gram* gram, int32_t row, int32_t col);
/* Kernel-spec JSON stored in the file; owned by the handle. */
QKMAR_API const char* qkm_gram_kernel_json(const qkm_gram* gram);

#ifdef __cplusplus
}
#endif

#endif /* QKMAR_H */
