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

#include "qkmar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace qkmar::eval {

namespace {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace

std::string algorithm_name(Algorithm algorithm) {
    return algorithm == Algorithm::svc ? "svc" : "krc";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "svc") return Algorithm::svc;
    if (name == "krc") return Algorithm::krc;
    throw_config("eval", "unknown algorithm '" + name + "' (expected svc or krc)");
}

bool plan_uses_gamma(const KernelPlan& plan) {
    return plan.family == kernels::KernelFamily::rbf ||
           plan.family == kernels::KernelFamily::laplacian;
}

bool plan_uses_bandwidth(const KernelPlan& plan) {
    return plan.family == kernels::KernelFamily::quantum;
}

const std::vector<double>& half_decade_grid() {
    static const std::vector<double> values = {
        1e-4,
        0.00031622776601683794,
        1e-3,
        0.0031622776601683794,
        1e-2,
        0.03162277660168379,
        1e-1,
        0.31622776601683794,
        1.0,
        3.1622776601683795,
        10.0,
        31.622776601683793,
        100.0,
        316.22776601683796,
        1000.0,
        3162.2776601683795,
        10000.0,
    };
    return values;
}

HyperGrid default_hyper_grid(const KernelPlan& plan) {
    HyperGrid grid;
    grid.reg_values = half_decade_grid();
    grid.component_values.resize(12);
    std::iota(grid.component_values.begin(), grid.component_values.end(), 1);
    if (plan_uses_gamma(plan)) {
        grid.gamma_values = half_decade_grid();
    }
    if (plan_uses_bandwidth(plan)) {
        grid.bandwidth_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        grid.layer_values = {2, 3, 4};
    }
    return grid;
}

void validate_grid(const HyperGrid& grid, const KernelPlan& plan) {
    if (grid.reg_values.empty()) {
        throw_config("eval", "grid requires at least one regularisation value");
    }
    if (grid.component_values.empty()) {
        throw_config("eval", "grid requires at least one component count");
    }
    for (double v : grid.reg_values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw_config("eval", "regularisation values must be finite and > 0");
        }
    }
    for (int c : grid.component_values) {
        if (c < 1) {
            throw_config("eval", "component counts must be >= 1");
        }
    }
    if (plan_uses_gamma(plan)) {
        if (grid.gamma_values.empty()) {
            throw_config("eval", "gamma grid is empty for a gamma kernel");
        }
        for (double v : grid.gamma_values) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw_config("eval", "gamma values must be finite and > 0");
            }
        }
    }
    if (plan_uses_bandwidth(plan)) {
        if (grid.bandwidth_values.empty() || grid.layer_values.empty()) {
            throw_config("eval", "bandwidth/layer grid is empty for a quantum kernel");
        }
        for (double v : grid.bandwidth_values) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw_config("eval", "bandwidth values must be finite and > 0");
            }
        }
        for (int l : grid.layer_values) {
            if (l < 1) {
                throw_config("eval", "layer counts must be >= 1");
            }
        }
    }
}

std::size_t grid_cardinality(const HyperGrid& grid, const KernelPlan& plan) {
    std::size_t cells = grid.component_values.size() * grid.reg_values.size();
    if (plan_uses_gamma(plan)) {
        cells *= grid.gamma_values.size();
    }
    if (plan_uses_bandwidth(plan)) {
        cells *= grid.bandwidth_values.size() * grid.layer_values.size();
    }
    return cells;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k,
                                                       std::uint64_t seed) {
    if (k < 2) {
        throw_config("eval", "k-fold requires k >= 2");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    for (const auto& [label, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k)) {
            throw_config("eval", "class " + std::to_string(label) + " has " +
                                     std::to_string(members.size()) +
                                     " members, fewer than k=" + std::to_string(k));
        }
    }

    RandomStream stream(seed, "folds");
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (auto& [label, members] : by_class) {
        stream.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            folds[i % static_cast<std::size_t>(k)].push_back(members[i]);
        }
    }
    for (auto& fold : folds) {
        std::sort(fold.begin(), fold.end());
    }
    return folds;
}

namespace {

/// Kernel axes of one cell, excluding the reg axis that shares its Gram.
struct KernelCell {
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double bandwidth = std::numeric_limits<double>::quiet_NaN();
    int layers = 0;
};

std::vector<KernelCell> enumerate_kernel_cells(const HyperGrid& grid, const KernelPlan& plan) {
    std::vector<KernelCell> cells;
    if (plan_uses_gamma(plan)) {
        for (double gamma : grid.gamma_values) {
            cells.push_back({gamma, std::numeric_limits<double>::quiet_NaN(), 0});
        }
    } else if (plan_uses_bandwidth(plan)) {
        for (double bandwidth : grid.bandwidth_values) {
            for (int layers : grid.layer_values) {
                cells.push_back({std::numeric_limits<double>::quiet_NaN(), bandwidth, layers});
            }
        }
    } else {
        cells.push_back({});
    }
    return cells;
}

kernels::KernelSpec make_kernel_spec(const KernelPlan& plan, int components,
                                     const KernelCell& cell) {
    switch (plan.family) {
        case kernels::KernelFamily::linear:
            return kernels::KernelSpec::make_linear();
        case kernels::KernelFamily::rbf:
            return kernels::KernelSpec::make_rbf(cell.gamma);
        case kernels::KernelFamily::laplacian:
            return kernels::KernelSpec::make_laplacian(cell.gamma);
        case kernels::KernelFamily::quantum: {
            qsim::EncodingSpec encoding;
            encoding.family = plan.circuit;
            encoding.qubits = components;
            encoding.layers = cell.layers;
            encoding.bandwidth = cell.bandwidth;
            return kernels::KernelSpec::make_quantum(encoding);
        }
    }
    throw_config("eval", "unknown kernel family");
}

kernels::SampleSet subset(const kernels::SampleSet& samples,
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

std::vector<int> subset(const std::vector<int>& labels, const std::vector<std::size_t>& indices) {
    std::vector<int> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.push_back(labels[i]);
    }
    return out;
}

double accuracy_of(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        correct += y_true[i] == y_pred[i] ? 1 : 0;
    }
    return y_true.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(y_true.size());
}

}  // namespace

GridSearchOutcome grid_search(const kernels::SampleSet& train, const std::vector<int>& labels,
                              Algorithm algorithm, const KernelPlan& plan, const HyperGrid& grid,
                              int folds, std::uint64_t seed, int workers) {
    validate_grid(grid, plan);
    if (static_cast<Eigen::Index>(labels.size()) != train.count()) {
        throw_config("eval", "label count does not match sample count");
    }

    const auto fold_indices = stratified_kfold(labels, folds, seed);
    const std::vector<KernelCell> kernel_cells = enumerate_kernel_cells(grid, plan);
    const std::size_t n_comp = grid.component_values.size();
    const std::size_t n_reg = grid.reg_values.size();
    const std::size_t n_kcell = kernel_cells.size();
    const std::size_t n_folds = fold_indices.size();

    // Per fold: train/validation index sets and one PCA fit at the largest
    // feasible component count, truncated per cell afterwards.
    struct FoldData {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> val_idx;
        kernels::SampleSet train_raw;
        kernels::SampleSet val_raw;
        std::vector<int> train_labels;
        std::vector<int> val_labels;
        preprocess::PcaModel pca;
        int max_feasible = 0;
    };
    std::vector<FoldData> fold_data(n_folds);
    const int k_requested = *std::max_element(grid.component_values.begin(),
                                              grid.component_values.end());

    parallel_for(n_folds, workers, [&](std::size_t f) {
        FoldData& data = fold_data[f];
        data.val_idx = fold_indices[f];
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!std::binary_search(data.val_idx.begin(), data.val_idx.end(), i)) {
                data.train_idx.push_back(i);
            }
        }
        data.train_raw = subset(train, data.train_idx);
        data.val_raw = subset(train, data.val_idx);
        data.train_labels = subset(labels, data.train_idx);
        data.val_labels = subset(labels, data.val_idx);
        data.max_feasible = static_cast<int>(
            std::min<Eigen::Index>(train.dimension(), data.train_raw.count()));
        const int k_fit = std::min(k_requested, data.max_feasible);
        data.pca = preprocess::pca_fit(data.train_raw, k_fit);
    });

    // accuracies[comp][kcell][reg][fold]; NaN marks a failed fit.
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> accuracies(n_comp * n_kcell * n_reg * n_folds, nan);
    std::vector<int> nonconverged(n_comp * n_kcell * n_reg * n_folds, 0);
    std::vector<std::string> errors(n_comp * n_kcell * n_reg * n_folds);
    auto slot = [&](std::size_t ci, std::size_t ki, std::size_t ri, std::size_t fi) {
        return ((ci * n_kcell + ki) * n_reg + ri) * n_folds + fi;
    };

    // One task per (component count, kernel cell, fold); the Gram pair is
    // built once and reused across every reg value.
    const std::size_t task_count = n_comp * n_kcell * n_folds;
    parallel_for(task_count, workers, [&](std::size_t task) {
        const std::size_t ci = task / (n_kcell * n_folds);
        const std::size_t ki = (task / n_folds) % n_kcell;
        const std::size_t fi = task % n_folds;
        const int components = grid.component_values[ci];
        const FoldData& data = fold_data[fi];

        try {
            if (components > data.max_feasible) {
                throw_config("eval", "component count " + std::to_string(components) +
                                         " exceeds fold feasibility " +
                                         std::to_string(data.max_feasible));
            }
            const preprocess::PcaModel pca = preprocess::pca_truncate(data.pca, components);
            const kernels::SampleSet train_feat = preprocess::pca_transform(pca, data.train_raw);
            const kernels::SampleSet val_feat = preprocess::pca_transform(pca, data.val_raw);
            const kernels::KernelSpec spec =
                make_kernel_spec(plan, components, kernel_cells[ki]);
            const kernels::GramMatrix gram = kernels::gram(spec, train_feat);
            const numerics::RealMatrix cross = kernels::cross_gram(spec, val_feat, train_feat);

            for (std::size_t ri = 0; ri < n_reg; ++ri) {
                const std::size_t index = slot(ci, ki, ri, fi);
                try {
                    std::vector<int> predictions;
                    if (algorithm == Algorithm::svc) {
                        const learn::SvcModel model =
                            learn::train_svc(gram, data.train_labels, grid.reg_values[ri]);
                        nonconverged[index] = model.converged ? 0 : 1;
                        predictions = learn::svc_decision(model, cross).predictions;
                    } else {
                        const learn::KrcModel model =
                            learn::train_krc(gram, data.train_labels, grid.reg_values[ri]);
                        predictions = learn::krc_decision(model, cross).predictions;
                    }
                    accuracies[index] = accuracy_of(data.val_labels, predictions);
                } catch (const Error& e) {
                    errors[index] = e.what();
                }
            }
        } catch (const Error& e) {
            for (std::size_t ri = 0; ri < n_reg; ++ri) {
                errors[slot(ci, ki, ri, fi)] = e.what();
            }
        }
    });

    // Assemble cells in canonical order: components, reg, gamma, bandwidth,
    // layers ascending. The kernel-cell list is already ordered by
    // (gamma) or (bandwidth, layers).
    GridSearchOutcome outcome;
    outcome.cv.folds = folds;
    outcome.cv.seed = seed;
    outcome.cv.cells.reserve(n_comp * n_reg * n_kcell);
    for (std::size_t ci = 0; ci < n_comp; ++ci) {
        for (std::size_t ri = 0; ri < n_reg; ++ri) {
            for (std::size_t ki = 0; ki < n_kcell; ++ki) {
                CellResult cell_result;
                cell_result.cell.components = grid.component_values[ci];
                cell_result.cell.reg = grid.reg_values[ri];
                cell_result.cell.gamma = kernel_cells[ki].gamma;
                cell_result.cell.bandwidth = kernel_cells[ki].bandwidth;
                cell_result.cell.layers = kernel_cells[ki].layers;
                cell_result.fold_accuracies.reserve(n_folds);
                double sum = 0.0;
                for (std::size_t fi = 0; fi < n_folds; ++fi) {
                    const std::size_t index = slot(ci, ki, ri, fi);
                    if (std::isnan(accuracies[index])) {
                        cell_result.failed = true;
                        if (cell_result.error.empty()) {
                            cell_result.error = errors[index];
                        }
                    } else {
                        cell_result.fold_accuracies.push_back(accuracies[index]);
                        sum += accuracies[index];
                        cell_result.nonconverged_folds += nonconverged[index];
                    }
                }
                if (!cell_result.failed) {
                    cell_result.mean_accuracy = sum / static_cast<double>(n_folds);
                }
                outcome.cv.cells.push_back(std::move(cell_result));
            }
        }
    }

    bool found = false;
    double best_accuracy = -1.0;
    for (std::size_t i = 0; i < outcome.cv.cells.size(); ++i) {
        const CellResult& cell = outcome.cv.cells[i];
        if (!cell.failed && cell.mean_accuracy > best_accuracy) {
            best_accuracy = cell.mean_accuracy;
            outcome.cv.best_index = i;
            found = true;
        }
    }
    if (!found) {
        throw_data("eval", "every grid cell failed during cross-validation: " +
                               (outcome.cv.cells.empty() ? std::string("empty grid")
                                                         : outcome.cv.cells.front().error));
    }

    // Retrain on the complete training set at the selected cell.
    const CellResult& best = outcome.cv.best();
    KernelCell best_kernel_cell{best.cell.gamma, best.cell.bandwidth, best.cell.layers};
    outcome.pca = preprocess::pca_fit(train, best.cell.components);
    const kernels::SampleSet train_feat = preprocess::pca_transform(outcome.pca, train);
    outcome.kernel = make_kernel_spec(plan, best.cell.components, best_kernel_cell);
    outcome.train_gram = kernels::gram(outcome.kernel, train_feat, {}, workers);
    if (algorithm == Algorithm::svc) {
        outcome.svc = learn::train_svc(outcome.train_gram, labels, best.cell.reg);
    } else {
        outcome.krc = learn::train_krc(outcome.train_gram, labels, best.cell.reg);
    }
    return outcome;
}

MetricsReport metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw_config("eval", "y_true and y_pred must have equal length");
    }
    if (y_true.empty()) {
        throw_config("eval", "metrics require at least one sample");
    }
    MetricsReport report;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1) {
            (y_pred[i] == 1 ? report.tp : report.fn) += 1;
        } else {
            (y_pred[i] == 1 ? report.fp : report.tn) += 1;
        }
    }
    const auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    const auto f1_of = [](double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); };

    report.accuracy = ratio(report.tp + report.tn, report.total());

    report.positive.precision = ratio(report.tp, report.tp + report.fp);
    report.positive.recall = ratio(report.tp, report.tp + report.fn);
    report.positive.f1 = f1_of(report.positive.precision, report.positive.recall);
    report.positive.support = report.tp + report.fn;

    report.negative.precision = ratio(report.tn, report.tn + report.fn);
    report.negative.recall = ratio(report.tn, report.tn + report.fp);
    report.negative.f1 = f1_of(report.negative.precision, report.negative.recall);
    report.negative.support = report.tn + report.fp;

    report.macro_avg.precision = 0.5 * (report.positive.precision + report.negative.precision);
    report.macro_avg.recall = 0.5 * (report.positive.recall + report.negative.recall);
    report.macro_avg.f1 = 0.5 * (report.positive.f1 + report.negative.f1);
    report.macro_avg.support = report.total();

    const double w_pos = ratio(report.positive.support, report.total());
    const double w_neg = ratio(report.negative.support, report.total());
    report.weighted_avg.precision =
        w_pos * report.positive.precision + w_neg * report.negative.precision;
    report.weighted_avg.recall = w_pos * report.positive.recall + w_neg * report.negative.recall;
    report.weighted_avg.f1 = w_pos * report.positive.f1 + w_neg * report.negative.f1;
    report.weighted_avg.support = report.total();
    return report;
}

namespace {

json class_metrics_to_json(const ClassMetrics& m) {
    return json{{"precision", m.precision},
                {"recall", m.recall},
                {"f1", m.f1},
                {"support", m.support}};
}

json cell_to_json(const CellResult& cell) {
    json j;
    j["components"] = cell.cell.components;
    j["reg"] = cell.cell.reg;
    if (!std::isnan(cell.cell.gamma)) {
        j["gamma"] = cell.cell.gamma;
    }
    if (!std::isnan(cell.cell.bandwidth)) {
        j["bandwidth"] = cell.cell.bandwidth;
        j["layers"] = cell.cell.layers;
    }
    j["failed"] = cell.failed;
    if (cell.failed) {
        j["error"] = cell.error;
    } else {
        j["mean_accuracy"] = cell.mean_accuracy;
        j["fold_accuracies"] = cell.fold_accuracies;
        j["nonconverged_folds"] = cell.nonconverged_folds;
    }
    return j;
}

}  // namespace

std::string metrics_to_json(const MetricsReport& report) {
    json j;
    j["accuracy"] = report.accuracy;
    j["true_class"] = class_metrics_to_json(report.positive);
    j["false_class"] = class_metrics_to_json(report.negative);
    j["macro_avg"] = class_metrics_to_json(report.macro_avg);
    j["weighted_avg"] = class_metrics_to_json(report.weighted_avg);
    j["confusion"] = {{"tp", report.tp}, {"fp", report.fp}, {"tn", report.tn}, {"fn", report.fn}};
    return j.dump();
}

std::string cv_result_to_json(const CvResult& result) {
    json j;
    j["folds"] = result.folds;
    j["seed"] = result.seed;
    j["best_index"] = result.best_index;
    j["best_cell"] = cell_to_json(result.best());
    json cells = json::array();
    for (const CellResult& cell : result.cells) {
        cells.push_back(cell_to_json(cell));
    }
    j["cells"] = cells;
    return j.dump();
}

std::string cv_result_to_csv(const CvResult& result) {
    std::ostringstream out;
    out << "components,reg,gamma,bandwidth,layers,mean_val_accuracy,failed,nonconverged_folds";
    for (int f = 0; f < result.folds; ++f) {
        out << ",fold_" << f;
    }
    out << "\n";
    for (const CellResult& cell : result.cells) {
        out << cell.cell.components << "," << format_double(cell.cell.reg) << ",";
        if (!std::isnan(cell.cell.gamma)) {
            out << format_double(cell.cell.gamma);
        }
        out << ",";
        if (!std::isnan(cell.cell.bandwidth)) {
            out << format_double(cell.cell.bandwidth);
        }
        out << ",";
        if (cell.cell.layers > 0) {
            out << cell.cell.layers;
        }
        out << ",";
        if (!cell.failed) {
            out << format_double(cell.mean_accuracy);
        }
        out << "," << (cell.failed ? "true" : "false") << "," << cell.nonconverged_folds;
        for (int f = 0; f < result.folds; ++f) {
            out << ",";
            if (!cell.failed && f < static_cast<int>(cell.fold_accuracies.size())) {
                out << format_double(cell.fold_accuracies[static_cast<std::size_t>(f)]);
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace qkmar::eval
