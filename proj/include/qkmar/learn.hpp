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
#include <string>
#include <vector>

#include "qkmar/kernels.hpp"
#include "qkmar/numerics.hpp"

namespace qkmar::learn {

/// Soft-margin support vector classifier in dual form. Invariants:
/// 0 <= alpha_i <= C and |sum alpha_i y_i| <= 1e-8, also on non-converged
/// exits.
struct SvcModel {
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<int> labels;  // +/-1 per training sample
    std::vector<std::size_t> support_indices;  // alpha > 0
    double c = 0.0;
    kernels::KernelSpec kernel;
    std::vector<std::string> sample_ids;
    bool converged = true;
};

/// Kernel ridge classifier: alpha solves (K + lambda I) alpha = y.
struct KrcModel {
    std::vector<double> alphas;
    double lambda = 0.0;
    kernels::KernelSpec kernel;
    std::vector<std::string> sample_ids;
};

struct Decision {
    std::vector<double> scores;
    std::vector<int> predictions;  // sign(score), sign(0) := +1
};

inline constexpr double kSvcDefaultTol = 1e-3;

/// Maximizes the soft-margin dual with sequential minimal optimization.
/// Pair selection: alternating sweeps over all points and over non-bound
/// points; the partner index maximizes |E_i - E_j| with deterministic
/// fallback scans. tol bounds the KKT violation; max_passes caps the number
/// of sweeps (0 selects the default of 10 * M). Exceeding the cap returns the
/// current iterate with converged = false rather than failing.
SvcModel train_svc(const kernels::GramMatrix& gram, const std::vector<int>& labels, double c,
                   double tol = kSvcDefaultTol, std::size_t max_passes = 0);

/// score_j = sum_i alpha_i y_i crossK(j, i) + b. crossK columns must align
/// with the model's training samples.
Decision svc_decision(const SvcModel& model, const numerics::RealMatrix& cross_kernel);

/// alpha = (K + lambda I)^{-1} y via Cholesky solve; lambda > 0 guarantees
/// positive definiteness for any PSD Gram.
KrcModel train_krc(const kernels::GramMatrix& gram, const std::vector<int>& labels,
                   double lambda);

/// score_j = sum_i alpha_i crossK(j, i).
Decision krc_decision(const KrcModel& model, const numerics::RealMatrix& cross_kernel);

/// Dual objective sum(alpha) - 1/2 sum alpha_i alpha_j y_i y_j K_ij of the
/// maximization form.
double svc_dual_objective(const numerics::RealMatrix& kernel, const std::vector<int>& labels,
                          const std::vector<double>& alphas);

/// Largest KKT violation of an iterate: max over samples of how far
/// y_i f(x_i) strays from the side its alpha requires.
double svc_kkt_violation(const kernels::GramMatrix& gram, const SvcModel& model);

std::string svc_model_to_json(const SvcModel& model);
SvcModel svc_model_from_json(const std::string& text);
std::string krc_model_to_json(const KrcModel& model);
KrcModel krc_model_from_json(const std::string& text);

}  // namespace qkmar::learn
