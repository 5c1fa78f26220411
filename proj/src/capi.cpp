// Copyright 2026 The qkmar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkmar.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include <json.hpp>

#include "qkmar/pipeline.hpp"

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_stage;

void clear_error() {
    g_last_error.clear();
    g_last_error_stage.clear();
}

qkm_status record_error(const qkmar::Error& e) {
    g_last_error = e.what();
    g_last_error_stage = e.stage();
    switch (e.code()) {
        case qkmar::ErrorCode::config:
            return QKM_ERROR_CONFIG;
        case qkmar::ErrorCode::data:
            return QKM_ERROR_DATA;
        case qkmar::ErrorCode::numeric:
            return QKM_ERROR_NUMERIC;
    }
    return QKM_ERROR_NUMERIC;
}

qkm_status record_error(const std::exception& e) {
    g_last_error = e.what();
    g_last_error_stage = "internal";
    return QKM_ERROR_NUMERIC;
}

template <typename Fn>
qkm_status guarded(Fn&& fn) {
    clear_error();
    try {
        fn();
        return QKM_OK;
    } catch (const qkmar::Error& e) {
        return record_error(e);
    } catch (const std::exception& e) {
        return record_error(e);
    }
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

void require(const void* pointer, const char* name) {
    if (pointer == nullptr) {
        throw qkmar::Error(qkmar::ErrorCode::config, "capi",
                           std::string(name) + " must not be NULL");
    }
}

}  // namespace

struct qkm_gram {
    qkmar::kernels::GramMatrix gram;
    std::string kernel_json;
};

extern "C" {

const char* qkm_version(void) { return qkmar::kVersion; }

const char* qkm_last_error(void) { return g_last_error.c_str(); }

const char* qkm_last_error_stage(void) { return g_last_error_stage.c_str(); }

void qkm_string_free(char* text) { delete[] text; }

qkm_status qkm_synth(const char* spec_json, const char* out_dir) {
    return guarded([&] {
        require(spec_json, "spec_json");
        require(out_dir, "out_dir");
        qkmar::pipeline::cmd_synth_json(spec_json, out_dir);
    });
}

qkm_status qkm_run(const char* config_json, int workers, char** report_json_out) {
    return guarded([&] {
        require(config_json, "config_json");
        const qkmar::pipeline::ExperimentConfig config =
            qkmar::pipeline::config_from_json(config_json);
        const qkmar::pipeline::RunReport report = qkmar::pipeline::cmd_run(config, workers);
        if (report_json_out != nullptr) {
            *report_json_out = copy_string(qkmar::pipeline::run_report_to_json(report));
        }
    });
}

qkm_status qkm_kernel_matrix(const char* config_json, const char* out_path, int workers) {
    return guarded([&] {
        require(config_json, "config_json");
        require(out_path, "out_path");
        const qkmar::pipeline::ExperimentConfig config =
            qkmar::pipeline::config_from_json(config_json);
        qkmar::pipeline::cmd_kernel(config, out_path, workers);
    });
}

qkm_status qkm_render_report(const char* report_json, char** text_out) {
    return guarded([&] {
        require(report_json, "report_json");
        require(text_out, "text_out");
        *text_out = copy_string(qkmar::pipeline::render_report(report_json));
    });
}

qkm_status qkm_default_grid(const char* kernel, char** grid_json_out) {
    return guarded([&] {
        require(kernel, "kernel");
        require(grid_json_out, "grid_json_out");
        const qkmar::pipeline::KernelChoice choice =
            qkmar::pipeline::kernel_choice_from_name(kernel);
        const qkmar::eval::KernelPlan plan = qkmar::pipeline::kernel_plan_of(choice);
        const qkmar::eval::HyperGrid grid = qkmar::eval::default_hyper_grid(plan);
        nlohmann::json j;
        j["kernel"] = kernel;
        j["reg"] = grid.reg_values;
        j["components"] = grid.component_values;
        if (qkmar::eval::plan_uses_gamma(plan)) {
            j["gamma"] = grid.gamma_values;
        }
        if (qkmar::eval::plan_uses_bandwidth(plan)) {
            j["bandwidth"] = grid.bandwidth_values;
            j["layers"] = grid.layer_values;
        }
        *grid_json_out = copy_string(j.dump(2) + "\n");
    });
}

qkm_status qkm_kernel_value(const char* kernel_spec_json, const double* x_re, const double* x_im,
                            const double* y_re, const double* y_im, int32_t dim,
                            double* value_out) {
    return guarded([&] {
        require(kernel_spec_json, "kernel_spec_json");
        require(x_re, "x_re");
        require(y_re, "y_re");
        require(value_out, "value_out");
        if (dim < 1) {
            qkmar::throw_config("capi", "dim must be >= 1");
        }
        const qkmar::kernels::KernelSpec spec =
            qkmar::kernels::kernel_spec_from_json(kernel_spec_json);

        qkmar::kernels::SampleSet a;
        qkmar::kernels::SampleSet b;
        a.is_complex = x_im != nullptr;
        b.is_complex = y_im != nullptr;
        a.features.resize(1, dim);
        b.features.resize(1, dim);
        for (int32_t i = 0; i < dim; ++i) {
            a.features(0, i) = {x_re[i], x_im != nullptr ? x_im[i] : 0.0};
            b.features(0, i) = {y_re[i], y_im != nullptr ? y_im[i] : 0.0};
        }
        const qkmar::numerics::RealMatrix value = qkmar::kernels::cross_gram(spec, a, b);
        *value_out = value(0, 0);
    });
}

qkm_status qkm_gram_load(const char* path, qkm_gram** gram_out) {
    return guarded([&] {
        require(path, "path");
        require(gram_out, "gram_out");
        auto handle = std::make_unique<qkm_gram>();
        handle->gram = qkmar::kernels::read_gram(path);
        handle->kernel_json = qkmar::kernels::kernel_spec_to_json(handle->gram.kernel);
        *gram_out = handle.release();
    });
}

void qkm_gram_free(qkm_gram* gram) { delete gram; }

int32_t qkm_gram_rows(const qkm_gram* gram) {
    return gram == nullptr ? 0 : static_cast<int32_t>(gram->gram.matrix.rows());
}

int32_t qkm_gram_cols(const qkm_gram* gram) {
    return gram == nullptr ? 0 : static_cast<int32_t>(gram->gram.matrix.cols());
}

double qkm_gram_value(const qkm_gram* gram, int32_t row, int32_t col) {
    if (gram == nullptr || row < 0 || col < 0 || row >= gram->gram.matrix.rows() ||
        col >= gram->gram.matrix.cols()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return gram->gram.matrix(row, col);
}

const char* qkm_gram_kernel_json(const qkm_gram* gram) {
    return gram == nullptr ? "" : gram->kernel_json.c_str();
}

}  // extern "C"
