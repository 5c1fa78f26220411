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

#include "qkmar/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace qkmar::learn {

namespace {

void check_labels(const std::vector<int>& labels, std::size_t expected,
                  bool require_both_classes) {
    if (labels.size() != expected) {
        throw_config("learn", "label count does not match Gram matrix size");
    }
    bool has_positive = false;
    bool has_negative = false;
    for (int y : labels) {
        if (y == 1) {
            has_positive = true;
        } else if (y == -1) {
            has_negative = true;
        } else {
            throw_config("learn", "labels must be +1 or -1");
        }
    }
    if (require_both_classes && (!has_positive || !has_negative)) {
        throw_data("learn", "training requires both classes to be present");
    }
}

/// Working state of the SMO solver over one training problem.
class SmoSolver {
  public:
    SmoSolver(const numerics::RealMatrix& kernel, const std::vector<int>& labels, double c,
              double tol)
        : k_(kernel),
          y_(labels),
          c_(c),
          tol_(tol),
          m_(labels.size()),
          alphas_(labels.size(), 0.0),
          errors_(labels.size(), 0.0),
          bias_(0.0) {
        // alpha = 0, b = 0 gives f(x_i) = 0 and E_i = -y_i.
        for (std::size_t i = 0; i < m_; ++i) {
            errors_[i] = -static_cast<double>(y_[i]);
        }
    }

    bool run(std::size_t max_passes) {
        bool examine_all = true;
        std::size_t pass = 0;
        while (pass < max_passes) {
            std::size_t changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < m_; ++i) {
                    changed += examine(i) ? 1 : 0;
                }
            } else {
                for (std::size_t i = 0; i < m_; ++i) {
                    if (is_free(alphas_[i])) {
                        changed += examine(i) ? 1 : 0;
                    }
                }
            }
            ++pass;
            if (examine_all) {
                if (changed == 0) {
                    return true;
                }
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
        return false;
    }

    const std::vector<double>& alphas() const { return alphas_; }

    /// KKT-based bias: mean of y_j - g_j over free support vectors, else the
    /// midpoint of the feasible interval.
    double final_bias() const {
        double free_sum = 0.0;
        std::size_t free_count = 0;
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m_; ++j) {
            double g = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                g += alphas_[i] * y_[i] * k_(i, j);
            }
            const double candidate = static_cast<double>(y_[j]) - g;
            if (is_free(alphas_[j])) {
                free_sum += candidate;
                ++free_count;
            } else {
                const bool at_zero = alphas_[j] <= bound_slack();
                const bool wants_lower = (at_zero && y_[j] == 1) || (!at_zero && y_[j] == -1);
                if (wants_lower) {
                    lower = std::max(lower, candidate);
                } else {
                    upper = std::min(upper, candidate);
                }
            }
        }
        if (free_count > 0) {
            return free_sum / static_cast<double>(free_count);
        }
        if (std::isfinite(lower) && std::isfinite(upper)) {
            return 0.5 * (lower + upper);
        }
        if (std::isfinite(lower)) {
            return lower;
        }
        if (std::isfinite(upper)) {
            return upper;
        }
        return 0.0;
    }

  private:
    double bound_slack() const { return 1e-12 * std::max(1.0, c_); }

    bool is_free(double alpha) const {
        return alpha > bound_slack() && alpha < c_ - bound_slack();
    }

    bool examine(std::size_t i2) {
        const double y2 = y_[i2];
        const double alpha2 = alphas_[i2];
        const double e2 = errors_[i2];
        const double r2 = e2 * y2;
        const bool violates =
            (r2 < -tol_ && alpha2 < c_ - bound_slack()) || (r2 > tol_ && alpha2 > bound_slack());
        if (!violates) {
            return false;
        }

        // Heuristic 1: the free point with the largest |E2 - E1|.
        std::size_t best = i2;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i != i2 && is_free(alphas_[i])) {
                const double gap = std::abs(e2 - errors_[i]);
                if (gap > best_gap) {
                    best_gap = gap;
                    best = i;
                }
            }
        }
        if (best != i2 && take_step(best, i2)) {
            return true;
        }

        // Fallbacks: deterministic scans over free points, then all points.
        for (std::size_t offset = 1; offset < m_; ++offset) {
            const std::size_t i1 = (i2 + offset) % m_;
            if (is_free(alphas_[i1]) && take_step(i1, i2)) {
                return true;
            }
        }
        for (std::size_t offset = 1; offset < m_; ++offset) {
            const std::size_t i1 = (i2 + offset) % m_;
            if (!is_free(alphas_[i1]) && take_step(i1, i2)) {
                return true;
            }
        }
        return false;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) {
            return false;
        }
        const double alpha1 = alphas_[i1];
        const double alpha2 = alphas_[i2];
        const double y1 = y_[i1];
        const double y2 = y_[i2];
        const double e1 = errors_[i1];
        const double e2 = errors_[i2];
        const double s = y1 * y2;

        double low;
        double high;
        if (y1 != y2) {
            low = std::max(0.0, alpha2 - alpha1);
            high = std::min(c_, c_ + alpha2 - alpha1);
        } else {
            low = std::max(0.0, alpha1 + alpha2 - c_);
            high = std::min(c_, alpha1 + alpha2);
        }
        if (low >= high) {
            return false;
        }

        const double k11 = k_(i1, i1);
        const double k12 = k_(i1, i2);
        const double k22 = k_(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double alpha2_new;
        if (eta > 0.0) {
            alpha2_new = alpha2 + y2 * (e1 - e2) / eta;
            alpha2_new = std::clamp(alpha2_new, low, high);
        } else {
            // Curvature is non-positive along the pair direction; compare the
            // objective at the interval endpoints.
            const double f1 = y1 * (e1 - bias_) - alpha1 * k11 - s * alpha2 * k12;
            const double f2 = y2 * (e2 - bias_) - s * alpha1 * k12 - alpha2 * k22;
            const double l1 = alpha1 + s * (alpha2 - low);
            const double h1 = alpha1 + s * (alpha2 - high);
            const double obj_low = l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11 +
                                   0.5 * low * low * k22 + s * low * l1 * k12;
            const double obj_high = h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11 +
                                    0.5 * high * high * k22 + s * high * h1 * k12;
            if (obj_low < obj_high - 1e-12) {
                alpha2_new = low;
            } else if (obj_low > obj_high + 1e-12) {
                alpha2_new = high;
            } else {
                return false;
            }
        }

        if (std::abs(alpha2_new - alpha2) < 1e-12 * (alpha2_new + alpha2 + 1e-12)) {
            return false;
        }
        const double alpha1_new = alpha1 + s * (alpha2 - alpha2_new);
        const double delta1 = alpha1_new - alpha1;
        const double delta2 = alpha2_new - alpha2;

        // Choose the bias that zeroes the error of a freshly free point.
        const double b1 = bias_ - (e1 + y1 * delta1 * k11 + y2 * delta2 * k12);
        const double b2 = bias_ - (e2 + y1 * delta1 * k12 + y2 * delta2 * k22);
        double bias_new;
        if (alpha1_new > bound_slack() && alpha1_new < c_ - bound_slack()) {
            bias_new = b1;
        } else if (alpha2_new > bound_slack() && alpha2_new < c_ - bound_slack()) {
            bias_new = b2;
        } else {
            bias_new = 0.5 * (b1 + b2);
        }

        const double bias_delta = bias_new - bias_;
        for (std::size_t i = 0; i < m_; ++i) {
            errors_[i] += y1 * delta1 * k_(i1, i) + y2 * delta2 * k_(i2, i) + bias_delta;
        }
        alphas_[i1] = alpha1_new;
        alphas_[i2] = alpha2_new;
        bias_ = bias_new;
        return true;
    }

    const numerics::RealMatrix& k_;
    const std::vector<int>& y_;
    double c_;
    double tol_;
    std::size_t m_;
    std::vector<double> alphas_;
    std::vector<double> errors_;
    double bias_;
};

}  // namespace

SvcModel train_svc(const kernels::GramMatrix& gram, const std::vector<int>& labels, double c,
                   double tol, std::size_t max_passes) {
    const auto m = static_cast<std::size_t>(gram.matrix.rows());
    check_labels(labels, m, true);
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw_config("learn", "SVC regularisation C must be finite and > 0");
    }
    if (!(tol > 0.0)) {
        throw_config("learn", "SVC tolerance must be > 0");
    }
    if (max_passes == 0) {
        max_passes = 10 * m;
    }

    SmoSolver solver(gram.matrix, labels, c, tol);
    const bool converged = solver.run(max_passes);
    if (!converged) {
        log_warn("SMO did not converge within " + std::to_string(max_passes) +
                 " passes (C=" + std::to_string(c) + "); returning best iterate");
    }

    SvcModel model;
    model.alphas = solver.alphas();
    model.bias = solver.final_bias();
    model.labels = labels;
    model.c = c;
    model.kernel = gram.kernel;
    model.sample_ids = gram.sample_ids;
    model.converged = converged;
    for (std::size_t i = 0; i < m; ++i) {
        model.alphas[i] = std::clamp(model.alphas[i], 0.0, c);
        if (model.alphas[i] > 0.0) {
            model.support_indices.push_back(i);
        }
    }
    return model;
}

Decision svc_decision(const SvcModel& model, const numerics::RealMatrix& cross_kernel) {
    const auto m = static_cast<Eigen::Index>(model.alphas.size());
    if (cross_kernel.cols() != m) {
        throw_config("learn", "cross-kernel columns (" + std::to_string(cross_kernel.cols()) +
                                  ") do not align with the " + std::to_string(m) +
                                  " training samples");
    }
    Decision decision;
    const Eigen::Index n = cross_kernel.rows();
    decision.scores.resize(n);
    decision.predictions.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double score = model.bias;
        for (Eigen::Index i = 0; i < m; ++i) {
            score += model.alphas[i] * model.labels[i] * cross_kernel(j, i);
        }
        decision.scores[j] = score;
        decision.predictions[j] = score < 0.0 ? -1 : 1;
    }
    return decision;
}

KrcModel train_krc(const kernels::GramMatrix& gram, const std::vector<int>& labels,
                   double lambda) {
    const auto m = static_cast<std::size_t>(gram.matrix.rows());
    check_labels(labels, m, false);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw_config("learn", "KRC regularisation lambda must be finite and > 0");
    }

    numerics::RealMatrix regularized = gram.matrix;
    regularized.diagonal().array() += lambda;
    numerics::RealVector y(m);
    for (std::size_t i = 0; i < m; ++i) {
        y(i) = labels[i];
    }
    const numerics::RealVector alpha = numerics::solve_spd(regularized, y);

    KrcModel model;
    model.alphas.assign(alpha.data(), alpha.data() + alpha.size());
    model.lambda = lambda;
    model.kernel = gram.kernel;
    model.sample_ids = gram.sample_ids;
    return model;
}

Decision krc_decision(const KrcModel& model, const numerics::RealMatrix& cross_kernel) {
    const auto m = static_cast<Eigen::Index>(model.alphas.size());
    if (cross_kernel.cols() != m) {
        throw_config("learn", "cross-kernel columns (" + std::to_string(cross_kernel.cols()) +
                                  ") do not align with the " + std::to_string(m) +
                                  " training samples");
    }
    Decision decision;
    const Eigen::Index n = cross_kernel.rows();
    decision.scores.resize(n);
    decision.predictions.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double score = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            score += model.alphas[i] * cross_kernel(j, i);
        }
        decision.scores[j] = score;
        decision.predictions[j] = score < 0.0 ? -1 : 1;
    }
    return decision;
}

double svc_dual_objective(const numerics::RealMatrix& kernel, const std::vector<int>& labels,
                          const std::vector<double>& alphas) {
    const std::size_t m = alphas.size();
    double linear_term = 0.0;
    double quadratic_term = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        linear_term += alphas[i];
        for (std::size_t j = 0; j < m; ++j) {
            quadratic_term += alphas[i] * alphas[j] * labels[i] * labels[j] * kernel(i, j);
        }
    }
    return linear_term - 0.5 * quadratic_term;
}

double svc_kkt_violation(const kernels::GramMatrix& gram, const SvcModel& model) {
    const std::size_t m = model.alphas.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double f = model.bias;
        for (std::size_t i = 0; i < m; ++i) {
            f += model.alphas[i] * model.labels[i] * gram.matrix(i, j);
        }
        const double margin = model.labels[j] * f;
        const double slack = 1e-9 * std::max(1.0, model.c);
        double violation = 0.0;
        if (model.alphas[j] <= slack) {
            violation = std::max(0.0, 1.0 - margin);
        } else if (model.alphas[j] >= model.c - slack) {
            violation = std::max(0.0, margin - 1.0);
        } else {
            violation = std::abs(margin - 1.0);
        }
        worst = std::max(worst, violation);
    }
    return worst;
}

namespace {

using nlohmann::json;

json doubles_to_json(const std::vector<double>& values) {
    json out = json::array();
    for (double v : values) {
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string svc_model_to_json(const SvcModel& model) {
    json j;
    j["algorithm"] = "svc";
    j["kernel"] = json::parse(kernels::kernel_spec_to_json(model.kernel));
    j["alphas"] = doubles_to_json(model.alphas);
    j["bias"] = model.bias;
    j["labels"] = model.labels;
    j["C"] = model.c;
    j["sample_ids"] = model.sample_ids;
    j["converged"] = model.converged;
    return j.dump();
}

SvcModel svc_model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("algorithm").get<std::string>() != "svc") {
            throw_data("learn", "model JSON is not an SVC model");
        }
        SvcModel model;
        model.kernel = kernels::kernel_spec_from_json(j.at("kernel").dump());
        model.alphas = j.at("alphas").get<std::vector<double>>();
        model.bias = j.at("bias").get<double>();
        model.labels = j.at("labels").get<std::vector<int>>();
        model.c = j.at("C").get<double>();
        model.sample_ids = j.at("sample_ids").get<std::vector<std::string>>();
        model.converged = j.at("converged").get<bool>();
        for (std::size_t i = 0; i < model.alphas.size(); ++i) {
            if (model.alphas[i] > 0.0) {
                model.support_indices.push_back(i);
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw_data("learn", std::string("invalid SVC model JSON: ") + e.what());
    }
}

std::string krc_model_to_json(const KrcModel& model) {
    json j;
    j["algorithm"] = "krc";
    j["kernel"] = json::parse(kernels::kernel_spec_to_json(model.kernel));
    j["alphas"] = doubles_to_json(model.alphas);
    j["lambda"] = model.lambda;
    j["sample_ids"] = model.sample_ids;
    return j.dump();
}

KrcModel krc_model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("algorithm").get<std::string>() != "krc") {
            throw_data("learn", "model JSON is not a KRC model");
        }
        KrcModel model;
        model.kernel = kernels::kernel_spec_from_json(j.at("kernel").dump());
        model.alphas = j.at("alphas").get<std::vector<double>>();
        model.lambda = j.at("lambda").get<double>();
        model.sample_ids = j.at("sample_ids").get<std::vector<std::string>>();
        return model;
    } catch (const json::exception& e) {
        throw_data("learn", std::string("invalid KRC model JSON: ") + e.what());
    }
}

}  // namespace qkmar::learn
