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

#include "qkmar/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkmar/learn.hpp"
#include "qkmar/preprocess.hpp"

namespace qkmar::pipeline {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct VariantShape {
    Eigen::Index rows;
    Eigen::Index cols;
    data::Chip::Product product;
};

VariantShape shape_of(ChipVariant variant) {
    switch (variant) {
        case ChipVariant::grd16:
            return {16, 16, data::Chip::Product::grd};
        case ChipVariant::slc16:
            return {16, 16, data::Chip::Product::slc};
        case ChipVariant::slc70x12:
            return {70, 12, data::Chip::Product::slc};
    }
    throw_config("pipeline", "unknown chip variant");
}

/// Reruns a stage body, rewrapping library errors with the pipeline stage
/// name so failures report where in the workflow they happened.
template <typename Fn>
auto run_stage(const std::string& stage, std::map<std::string, double>& timings, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            const auto stop = std::chrono::steady_clock::now();
            timings[stage] =
                std::chrono::duration<double, std::milli>(stop - start).count();
            return;
        } else {
            auto result = fn();
            const auto stop = std::chrono::steady_clock::now();
            timings[stage] =
                std::chrono::duration<double, std::milli>(stop - start).count();
            return result;
        }
    } catch (const Error& e) {
        throw Error(e.code(), stage, std::string(e.what()));
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw_data("pipeline", "cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw_data("pipeline", "write failed for '" + path + "'");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_data("pipeline", "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

std::string chip_variant_name(ChipVariant variant) {
    switch (variant) {
        case ChipVariant::grd16:
            return "grd16";
        case ChipVariant::slc16:
            return "slc16";
        case ChipVariant::slc70x12:
            return "slc70x12";
    }
    throw_config("pipeline", "unknown chip variant");
}

ChipVariant chip_variant_from_name(const std::string& name) {
    if (name == "grd16") return ChipVariant::grd16;
    if (name == "slc16") return ChipVariant::slc16;
    if (name == "slc70x12") return ChipVariant::slc70x12;
    throw_config("pipeline", "unknown chip variant '" + name +
                                 "' (expected grd16, slc16, or slc70x12)");
}

std::string kernel_choice_name(KernelChoice choice) {
    switch (choice) {
        case KernelChoice::linear:
            return "linear";
        case KernelChoice::rbf:
            return "rbf";
        case KernelChoice::laplacian:
            return "laplacian";
        case KernelChoice::ry1dst:
            return "ry1dst";
        case KernelChoice::ryrz1dalt:
            return "ryrz1dalt";
        case KernelChoice::cryrz1dst:
            return "cryrz1dst";
    }
    throw_config("pipeline", "unknown kernel choice");
}

KernelChoice kernel_choice_from_name(const std::string& name) {
    if (name == "linear") return KernelChoice::linear;
    if (name == "rbf") return KernelChoice::rbf;
    if (name == "laplacian") return KernelChoice::laplacian;
    if (name == "ry1dst") return KernelChoice::ry1dst;
    if (name == "ryrz1dalt") return KernelChoice::ryrz1dalt;
    if (name == "cryrz1dst") return KernelChoice::cryrz1dst;
    throw_config("pipeline", "unknown kernel '" + name +
                                 "' (expected linear, rbf, laplacian, ry1dst, ryrz1dalt, "
                                 "or cryrz1dst)");
}

eval::KernelPlan kernel_plan_of(KernelChoice choice) {
    eval::KernelPlan plan;
    switch (choice) {
        case KernelChoice::linear:
            plan.family = kernels::KernelFamily::linear;
            break;
        case KernelChoice::rbf:
            plan.family = kernels::KernelFamily::rbf;
            break;
        case KernelChoice::laplacian:
            plan.family = kernels::KernelFamily::laplacian;
            break;
        case KernelChoice::ry1dst:
            plan.family = kernels::KernelFamily::quantum;
            plan.circuit = qsim::CircuitFamily::Ry1DSt;
            break;
        case KernelChoice::ryrz1dalt:
            plan.family = kernels::KernelFamily::quantum;
            plan.circuit = qsim::CircuitFamily::RyRz1DAlt;
            break;
        case KernelChoice::cryrz1dst:
            plan.family = kernels::KernelFamily::quantum;
            plan.circuit = qsim::CircuitFamily::CRyRz1DSt;
            break;
    }
    return plan;
}

void validate(const ExperimentConfig& config) {
    if (config.dataset.empty()) {
        throw_config("pipeline", "config requires a dataset path");
    }
    const bool complex_kernel = config.kernel == KernelChoice::cryrz1dst;
    const bool complex_variant = config.chip_variant != ChipVariant::grd16;
    if (complex_kernel != complex_variant) {
        throw_config("pipeline", "kernel '" + kernel_choice_name(config.kernel) +
                                     "' is incompatible with chip variant '" +
                                     chip_variant_name(config.chip_variant) +
                                     "': classical and real-feature quantum kernels require "
                                     "grd16; cryrz1dst requires an SLC variant");
    }
    if (config.folds < 2) {
        throw_config("pipeline", "folds must be >= 2");
    }
    if (!(config.train_fraction > 0.0) || !(config.train_fraction < 1.0)) {
        throw_config("pipeline", "train_fraction must lie strictly between 0 and 1");
    }
    if (config.per_class == 0) {
        throw_config("pipeline", "per_class must be >= 1");
    }
    eval::validate_grid(config.grid, kernel_plan_of(config.kernel));
}

namespace {

std::vector<double> doubles_from_json(const json& j, const std::string& key) {
    std::vector<double> out;
    for (const auto& value : j.at(key)) {
        out.push_back(value.get<double>());
    }
    return out;
}

std::vector<int> ints_from_json(const json& j, const std::string& key) {
    std::vector<int> out;
    for (const auto& value : j.at(key)) {
        out.push_back(value.get<int>());
    }
    return out;
}

eval::HyperGrid grid_from_json(const json& grid_json, const eval::KernelPlan& plan) {
    eval::HyperGrid grid = eval::default_hyper_grid(plan);
    if (grid_json.contains("reg")) {
        grid.reg_values = doubles_from_json(grid_json, "reg");
    }
    if (grid_json.contains("components")) {
        grid.component_values = ints_from_json(grid_json, "components");
    }
    if (grid_json.contains("gamma")) {
        if (!eval::plan_uses_gamma(plan)) {
            throw_config("pipeline", "gamma grid does not apply to this kernel");
        }
        grid.gamma_values = doubles_from_json(grid_json, "gamma");
    }
    if (grid_json.contains("bandwidth")) {
        if (!eval::plan_uses_bandwidth(plan)) {
            throw_config("pipeline", "bandwidth grid does not apply to this kernel");
        }
        grid.bandwidth_values = doubles_from_json(grid_json, "bandwidth");
    }
    if (grid_json.contains("layers")) {
        if (!eval::plan_uses_bandwidth(plan)) {
            throw_config("pipeline", "layer grid does not apply to this kernel");
        }
        grid.layer_values = ints_from_json(grid_json, "layers");
    }
    return grid;
}

json grid_to_json(const eval::HyperGrid& grid, const eval::KernelPlan& plan) {
    json j;
    j["reg"] = grid.reg_values;
    j["components"] = grid.component_values;
    if (eval::plan_uses_gamma(plan)) {
        j["gamma"] = grid.gamma_values;
    }
    if (eval::plan_uses_bandwidth(plan)) {
        j["bandwidth"] = grid.bandwidth_values;
        j["layers"] = grid.layer_values;
    }
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw_config("pipeline", std::string("invalid config JSON: ") + e.what());
    }
    try {
        ExperimentConfig config;
        config.dataset = j.at("dataset").get<std::string>();
        config.task = data::label_field_from_name(j.at("task").get<std::string>());
        config.chip_variant = chip_variant_from_name(j.at("chip_variant").get<std::string>());
        config.kernel = kernel_choice_from_name(j.at("kernel").get<std::string>());
        config.algorithm = eval::algorithm_from_name(j.at("algorithm").get<std::string>());
        config.folds = j.value("folds", config.folds);
        config.train_fraction = j.value("train_fraction", config.train_fraction);
        config.per_class = j.value("per_class", config.per_class);
        config.seed = j.value("seed", config.seed);
        config.output_dir = j.value("output_dir", config.output_dir);
        const eval::KernelPlan plan = kernel_plan_of(config.kernel);
        config.grid = j.contains("grid") ? grid_from_json(j.at("grid"), plan)
                                         : eval::default_hyper_grid(plan);
        validate(config);
        return config;
    } catch (const json::exception& e) {
        throw_config("pipeline", std::string("invalid config JSON: ") + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["dataset"] = config.dataset;
    j["task"] = data::label_field_name(config.task);
    j["chip_variant"] = chip_variant_name(config.chip_variant);
    j["kernel"] = kernel_choice_name(config.kernel);
    j["algorithm"] = eval::algorithm_name(config.algorithm);
    j["grid"] = grid_to_json(config.grid, kernel_plan_of(config.kernel));
    j["folds"] = config.folds;
    j["train_fraction"] = config.train_fraction;
    j["per_class"] = config.per_class;
    j["seed"] = config.seed;
    j["output_dir"] = config.output_dir;
    return j.dump();
}

void cmd_synth(const data::SynthSpec& spec, const std::string& out_dir) {
    data::validate(spec);
    fs::create_directories(out_dir);
    const data::SynthDataset dataset = data::synth_generate(spec);
    std::vector<data::ChipRecord> records;
    records.reserve(dataset.chips.size());
    char name[32];
    for (std::size_t i = 0; i < dataset.chips.size(); ++i) {
        std::snprintf(name, sizeof(name), "chip_%05zu.sarc", i);
        data::write_chip((fs::path(out_dir) / name).string(), dataset.chips[i]);
        data::ChipRecord record;
        record.chip_path = name;
        record.is_vessel = dataset.labels[i] > 0;
        record.is_fishing = dataset.labels[i] > 0;
        record.confidence = data::Confidence::high;
        records.push_back(std::move(record));
    }
    data::write_manifest((fs::path(out_dir) / "manifest.csv").string(), records);
}

void cmd_synth_json(const std::string& spec_json, const std::string& out_dir) {
    cmd_synth(data::synth_spec_from_json(spec_json), out_dir);
}

namespace {

/// Loaded and h-transformed dataset, ready for splitting.
struct PreparedData {
    kernels::SampleSet features;  // flattened, full dimension
    std::vector<int> labels;
    std::vector<std::string> ids;
};

PreparedData prepare(const ExperimentConfig& config, std::map<std::string, double>& timings) {
    const VariantShape expected = shape_of(config.chip_variant);

    auto records = run_stage("ingest", timings, [&] {
        return data::read_manifest((fs::path(config.dataset) / "manifest.csv").string());
    });
    records = run_stage("filter", timings,
                        [&] { return data::filter_high_confidence(records); });
    records = run_stage("sample", timings, [&] {
        return data::balanced_sample(records, config.task, config.per_class, config.seed);
    });

    PreparedData prepared;
    run_stage("load", timings, [&] {
        const Eigen::Index dim = expected.rows * expected.cols;
        prepared.features.is_complex = expected.product == data::Chip::Product::slc;
        prepared.features.features.resize(static_cast<Eigen::Index>(records.size()), dim);
        prepared.labels.reserve(records.size());
        prepared.ids.reserve(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            const data::ChipRecord& record = records[i];
            const data::Chip chip =
                data::read_chip((fs::path(config.dataset) / record.chip_path).string());
            if (chip.product != expected.product || chip.rows() != expected.rows ||
                chip.cols() != expected.cols) {
                throw_data("pipeline",
                           "chip '" + record.chip_path + "' is " +
                               data::product_name(chip.product) + " " +
                               std::to_string(chip.rows()) + "x" + std::to_string(chip.cols()) +
                               ", expected " + data::product_name(expected.product) + " " +
                               std::to_string(expected.rows) + "x" +
                               std::to_string(expected.cols));
            }
            const numerics::ComplexMatrix transformed = preprocess::h_transform(chip.pixels);
            prepared.features.features.row(static_cast<Eigen::Index>(i)) =
                preprocess::flatten(transformed).transpose();
            const std::optional<bool> label = config.task == data::LabelField::is_vessel
                                                  ? record.is_vessel
                                                  : record.is_fishing;
            prepared.labels.push_back(*label ? 1 : -1);
            prepared.ids.push_back(record.chip_path);
        }
    });
    return prepared;
}

kernels::SampleSet take_rows(const kernels::SampleSet& samples,
                             const std::vector<std::size_t>& indices) {
    kernels::SampleSet out;
    out.is_complex = samples.is_complex;
    out.features.resize(static_cast<Eigen::Index>(indices.size()), samples.dimension());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) =
            samples.features.row(static_cast<Eigen::Index>(indices[i]));
    }
    return out;
}

}  // namespace

void cmd_kernel(const ExperimentConfig& config, const std::string& out_path, int workers) {
    validate(config);
    const eval::KernelPlan plan = kernel_plan_of(config.kernel);
    const std::size_t cells = eval::grid_cardinality(config.grid, plan);
    if (cells != 1) {
        throw_config("pipeline", "kernel export requires a config resolving to a single grid "
                                 "cell; this grid has " +
                                     std::to_string(cells) + " cells");
    }

    std::map<std::string, double> timings;
    const PreparedData prepared = prepare(config, timings);
    const preprocess::SplitIndices split =
        preprocess::stratified_split(prepared.labels, config.train_fraction, config.seed);
    const kernels::SampleSet train_raw = take_rows(prepared.features, split.train);

    const int components = config.grid.component_values.front();
    const preprocess::PcaModel pca = preprocess::pca_fit(train_raw, components);
    const kernels::SampleSet train_feat = preprocess::pca_transform(pca, train_raw);

    eval::GridCell cell;
    cell.components = components;
    if (eval::plan_uses_gamma(plan)) {
        cell.gamma = config.grid.gamma_values.front();
    }
    kernels::KernelSpec spec;
    if (plan.family == kernels::KernelFamily::quantum) {
        qsim::EncodingSpec encoding;
        encoding.family = plan.circuit;
        encoding.qubits = components;
        encoding.layers = config.grid.layer_values.front();
        encoding.bandwidth = config.grid.bandwidth_values.front();
        spec = kernels::KernelSpec::make_quantum(encoding);
    } else if (plan.family == kernels::KernelFamily::rbf) {
        spec = kernels::KernelSpec::make_rbf(cell.gamma);
    } else if (plan.family == kernels::KernelFamily::laplacian) {
        spec = kernels::KernelSpec::make_laplacian(cell.gamma);
    } else {
        spec = kernels::KernelSpec::make_linear();
    }

    std::vector<std::string> train_ids;
    train_ids.reserve(split.train.size());
    for (std::size_t i : split.train) {
        train_ids.push_back(prepared.ids[i]);
    }
    const kernels::GramMatrix gram = kernels::gram(spec, train_feat, train_ids, workers);
    kernels::write_gram(out_path, gram);
}

RunReport cmd_run(const ExperimentConfig& config, int workers) {
    validate(config);
    RunReport report;
    report.config = config;

    const PreparedData prepared = prepare(config, report.timings_ms);

    const preprocess::SplitIndices split = run_stage("split", report.timings_ms, [&] {
        return preprocess::stratified_split(prepared.labels, config.train_fraction, config.seed);
    });
    const kernels::SampleSet train_raw = take_rows(prepared.features, split.train);
    const kernels::SampleSet test_raw = take_rows(prepared.features, split.test);
    std::vector<int> train_labels;
    std::vector<int> test_labels;
    for (std::size_t i : split.train) {
        train_labels.push_back(prepared.labels[i]);
    }
    for (std::size_t i : split.test) {
        test_labels.push_back(prepared.labels[i]);
    }
    report.train_count = train_labels.size();
    report.test_count = test_labels.size();

    const eval::KernelPlan plan = kernel_plan_of(config.kernel);
    const eval::GridSearchOutcome outcome = run_stage("grid_search", report.timings_ms, [&] {
        return eval::grid_search(train_raw, train_labels, config.algorithm, plan, config.grid,
                                 config.folds, config.seed, workers);
    });
    report.cv = outcome.cv;
    report.kernel_json = kernels::kernel_spec_to_json(outcome.kernel);
    report.final_converged = outcome.svc.has_value() ? outcome.svc->converged : true;

    std::string model_json;
    run_stage("evaluate", report.timings_ms, [&] {
        const kernels::SampleSet train_feat = preprocess::pca_transform(outcome.pca, train_raw);
        const kernels::SampleSet test_feat = preprocess::pca_transform(outcome.pca, test_raw);
        const numerics::RealMatrix test_cross =
            kernels::cross_gram(outcome.kernel, test_feat, train_feat, workers);
        std::vector<int> train_pred;
        std::vector<int> test_pred;
        if (outcome.svc.has_value()) {
            train_pred = learn::svc_decision(*outcome.svc, outcome.train_gram.matrix).predictions;
            test_pred = learn::svc_decision(*outcome.svc, test_cross).predictions;
            model_json = learn::svc_model_to_json(*outcome.svc);
        } else {
            train_pred = learn::krc_decision(*outcome.krc, outcome.train_gram.matrix).predictions;
            test_pred = learn::krc_decision(*outcome.krc, test_cross).predictions;
            model_json = learn::krc_model_to_json(*outcome.krc);
        }
        report.train_metrics = eval::metrics(train_labels, train_pred);
        report.test_metrics = eval::metrics(test_labels, test_pred);
    });

    run_stage("write", report.timings_ms, [&] {
        fs::create_directories(config.output_dir);
        const fs::path out(config.output_dir);
        write_text_file((out / "cv_results.csv").string(), eval::cv_result_to_csv(report.cv));
        write_text_file((out / "model.json").string(), model_json);
        write_text_file((out / "report.json").string(), run_report_to_json(report));
    });
    return report;
}

std::string run_report_to_json(const RunReport& report) {
    json j;
    j["version"] = kVersion;
    j["config"] = json::parse(config_to_json(report.config));
    j["cv"] = json::parse(eval::cv_result_to_json(report.cv));
    j["selected_kernel"] = json::parse(report.kernel_json);
    j["train_metrics"] = json::parse(eval::metrics_to_json(report.train_metrics));
    j["test_metrics"] = json::parse(eval::metrics_to_json(report.test_metrics));
    j["final_model_converged"] = report.final_converged;
    j["train_count"] = report.train_count;
    j["test_count"] = report.test_count;
    json timings;
    for (const auto& [stage, ms] : report.timings_ms) {
        timings[stage] = ms;
    }
    j["timings_ms"] = timings;
    return j.dump(2) + "\n";
}

namespace {

std::string metrics_line(const json& metrics) {
    std::ostringstream out;
    out << "accuracy " << metrics.at("accuracy").get<double>();
    const json& true_class = metrics.at("true_class");
    out << " | true-class precision " << true_class.at("precision").get<double>() << ", recall "
        << true_class.at("recall").get<double>() << ", F1 " << true_class.at("f1").get<double>();
    return out.str();
}

}  // namespace

std::string render_report(const std::string& report_json) {
    json j;
    try {
        j = json::parse(report_json);
    } catch (const json::exception& e) {
        throw_data("pipeline", std::string("invalid report JSON: ") + e.what());
    }
    try {
        std::ostringstream out;
        const json& config = j.at("config");
        out << "qkmar run report (version " << j.at("version").get<std::string>() << ")\n";
        out << "  task:         " << config.at("task").get<std::string>() << "\n";
        out << "  data:         " << config.at("chip_variant").get<std::string>() << " from "
            << config.at("dataset").get<std::string>() << "\n";
        out << "  kernel:       " << config.at("kernel").get<std::string>() << " + "
            << config.at("algorithm").get<std::string>() << "\n";
        out << "  seed:         " << config.at("seed").get<std::uint64_t>() << "\n";
        out << "  samples:      " << j.at("train_count").get<std::size_t>() << " train / "
            << j.at("test_count").get<std::size_t>() << " test\n";
        const json& best = j.at("cv").at("best_cell");
        out << "  best cell:    components " << best.at("components").get<int>() << ", reg "
            << best.at("reg").get<double>();
        if (best.contains("gamma")) {
            out << ", gamma " << best.at("gamma").get<double>();
        }
        if (best.contains("bandwidth")) {
            out << ", bandwidth " << best.at("bandwidth").get<double>() << ", layers "
                << best.at("layers").get<int>();
        }
        out << "\n";
        out << "  validation:   mean accuracy " << best.at("mean_accuracy").get<double>()
            << " over " << j.at("cv").at("folds").get<int>() << " folds\n";
        out << "  train:        " << metrics_line(j.at("train_metrics")) << "\n";
        out << "  test:         " << metrics_line(j.at("test_metrics")) << "\n";
        if (!j.at("final_model_converged").get<bool>()) {
            out << "  note:         final SMO fit did not converge within its pass budget\n";
        }
        return out.str();
    } catch (const json::exception& e) {
        throw_data("pipeline", std::string("report JSON missing fields: ") + e.what());
    }
}

}  // namespace qkmar::pipeline
