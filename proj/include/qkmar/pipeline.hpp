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

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qkmar/data.hpp"
#include "qkmar/eval.hpp"

namespace qkmar::pipeline {

enum class ChipVariant { grd16, slc16, slc70x12 };

std::string chip_variant_name(ChipVariant variant);
ChipVariant chip_variant_from_name(const std::string& name);

/// The kernels an experiment can select, by their published names.
enum class KernelChoice { linear, rbf, laplacian, ry1dst, ryrz1dalt, cryrz1dst };

std::string kernel_choice_name(KernelChoice choice);
KernelChoice kernel_choice_from_name(const std::string& name);
eval::KernelPlan kernel_plan_of(KernelChoice choice);

/// Declarative description of one experiment run. Classical kernels and the
/// real-feature quantum kernels pair with grd16 only; cryrz1dst requires an
/// SLC variant. Incompatible pairings are rejected before any compute.
struct ExperimentConfig {
    std::string dataset;
    data::LabelField task = data::LabelField::is_vessel;
    ChipVariant chip_variant = ChipVariant::grd16;
    KernelChoice kernel = KernelChoice::linear;
    eval::Algorithm algorithm = eval::Algorithm::svc;
    eval::HyperGrid grid;  // defaults filled per kernel when absent
    int folds = 10;
    double train_fraction = 0.8;
    std::size_t per_class = 625;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

/// Everything cmd_run produces. Regenerating with the same config and seed
/// yields a byte-identical report except for the timing block.
struct RunReport {
    ExperimentConfig config;
    eval::CvResult cv;
    std::string kernel_json;  // the selected cell's resolved kernel
    eval::MetricsReport train_metrics;
    eval::MetricsReport test_metrics;
    bool final_converged = true;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    std::map<std::string, double> timings_ms;
};

std::string run_report_to_json(const RunReport& report);

/// Writes SARC chips plus a manifest for a synthetic spec; deterministic
/// bytes for a fixed spec.
void cmd_synth(const data::SynthSpec& spec, const std::string& out_dir);
void cmd_synth_json(const std::string& spec_json, const std::string& out_dir);

/// Builds the preprocessed training Gram matrix for a config that pins every
/// hyperparameter axis to a single value, and writes it as a QKGM file.
void cmd_kernel(const ExperimentConfig& config, const std::string& out_path, int workers = 1);

/// The full workflow: ingest, HIGH filter, balanced sample, h-transform,
/// stratified split, cross-validated grid search, retrain, test evaluation.
/// Writes report.json, cv_results.csv, and model.json into
/// config.output_dir and returns the report.
RunReport cmd_run(const ExperimentConfig& config, int workers = 1);

/// Human-readable rendering of a run report JSON document.
std::string render_report(const std::string& report_json);

}  // namespace qkmar::pipeline
