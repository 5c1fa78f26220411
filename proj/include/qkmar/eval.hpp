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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qkmar/kernels.hpp"
#include "qkmar/learn.hpp"
#include "qkmar/preprocess.hpp"

namespace qkmar::eval {

enum class Algorithm { svc, krc };

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

/// Which kernel a grid search runs over: a classical family, or the quantum
/// family together with its circuit.
struct KernelPlan {
    kernels::KernelFamily family = kernels::KernelFamily::linear;
    qsim::CircuitFamily circuit = qsim::CircuitFamily::Ry1DSt;
};

bool plan_uses_gamma(const KernelPlan& plan);
bool plan_uses_bandwidth(const KernelPlan& plan);

/// Hyperparameter axes swept by cross-validation. Axes that do not apply to
/// the kernel family stay empty.
struct HyperGrid {
    std::vector<double> reg_values;        // C (SVC) or lambda (KRC)
    std::vector<double> gamma_values;      // rbf / laplacian
    std::vector<double> bandwidth_values;  // quantum
    std::vector<int> layer_values;         // quantum
    std::vector<int> component_values;     // every kernel
};

/// The 17 half-decade regularisation/bandwidth values 10^-4 .. 10^4.
const std::vector<double>& half_decade_grid();

/// Default grid per kernel family: reg and gamma over the half-decade
/// values, components 1..12, bandwidth 0.1..1.0 in steps of 0.1, layers
/// {2, 3, 4}.
HyperGrid default_hyper_grid(const KernelPlan& plan);

void validate_grid(const HyperGrid& grid, const KernelPlan& plan);

/// Number of cells the grid enumerates for this plan.
std::size_t grid_cardinality(const HyperGrid& grid, const KernelPlan& plan);

/// One hyperparameter tuple. Axes that do not apply hold NaN / 0.
struct GridCell {
    int components = 0;
    double reg = 0.0;
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double bandwidth = std::numeric_limits<double>::quiet_NaN();
    int layers = 0;
};

struct CellResult {
    GridCell cell;
    std::vector<double> fold_accuracies;
    double mean_accuracy = std::numeric_limits<double>::quiet_NaN();
    int nonconverged_folds = 0;
    bool failed = false;
    std::string error;
};

struct CvResult {
    std::vector<CellResult> cells;  // canonical grid order
    std::size_t best_index = 0;
    int folds = 0;
    std::uint64_t seed = 0;

    const CellResult& best() const { return cells.at(best_index); }
};

/// k disjoint validation index sets covering all samples; per-fold class
/// counts differ by at most one from exact proportionality. The shuffle
/// stream is keyed by (seed, "folds").
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k,
                                                       std::uint64_t seed);

/// Grid search plus the final model retrained on the full training set at
/// the selected cell.
struct GridSearchOutcome {
    CvResult cv;
    preprocess::PcaModel pca;
    kernels::KernelSpec kernel;
    kernels::GramMatrix train_gram;
    std::optional<learn::SvcModel> svc;
    std::optional<learn::KrcModel> krc;
};

/// For every grid cell: per fold, fit PCA at the cell's component count on
/// the fold's training part, build the Gram matrices, train, and score
/// validation accuracy. Gram matrices are shared across reg values of the
/// same kernel cell. Cells whose training raises an error are recorded as
/// failed and excluded from selection; ties on mean validation accuracy
/// resolve to the earliest cell in canonical order (components, reg, gamma,
/// bandwidth, layers ascending). The winning cell is then retrained on the
/// complete training set.
GridSearchOutcome grid_search(const kernels::SampleSet& train,
                              const std::vector<int>& labels, Algorithm algorithm,
                              const KernelPlan& plan, const HyperGrid& grid, int folds,
                              std::uint64_t seed, int workers = 1);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

/// Confusion counts are taken with +1 (the task's "true" class) as positive.
struct MetricsReport {
    double accuracy = 0.0;
    ClassMetrics positive;
    ClassMetrics negative;
    ClassMetrics macro_avg;
    ClassMetrics weighted_avg;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

MetricsReport metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

std::string metrics_to_json(const MetricsReport& report);
std::string cv_result_to_json(const CvResult& result);

/// Flat CSV, one row per grid cell.
std::string cv_result_to_csv(const CvResult& result);

}  // namespace qkmar::eval
