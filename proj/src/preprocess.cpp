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

#include "qkmar/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace qkmar::preprocess {

std::complex<double> h_transform(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw_data("preprocess", "h_transform requires a finite input");
    }
    if (z.imag() == 0.0 && z.real() < 0.0) {
        throw_data("preprocess", "h_transform rejects negative real pixels");
    }
    const double r = std::abs(z);
    if (r == 0.0) {
        return {0.0, 0.0};
    }
    // Scaling by a positive real leaves arg(z) untouched.
    const double scale = std::log1p(r) / r;
    return {z.real() * scale, z.imag() * scale};
}

numerics::ComplexMatrix h_transform(const numerics::ComplexMatrix& pixels) {
    numerics::ComplexMatrix out(pixels.rows(), pixels.cols());
    for (Eigen::Index i = 0; i < pixels.rows(); ++i) {
        for (Eigen::Index j = 0; j < pixels.cols(); ++j) {
            out(i, j) = h_transform(pixels(i, j));
        }
    }
    return out;
}

numerics::ComplexVector flatten(const numerics::ComplexMatrix& chip) {
    if (chip.size() == 0) {
        throw_data("preprocess", "cannot flatten an empty chip");
    }
    numerics::ComplexVector out(chip.size());
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < chip.rows(); ++i) {
        for (Eigen::Index j = 0; j < chip.cols(); ++j) {
            out(idx++) = chip(i, j);
        }
    }
    return out;
}

SplitIndices stratified_split(const std::vector<int>& labels, double train_fraction,
                              std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw_config("preprocess", "train_fraction must lie strictly between 0 and 1");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    if (by_class.empty()) {
        throw_data("preprocess", "stratified_split requires at least one sample");
    }
    for (const auto& [label, members] : by_class) {
        if (members.empty()) {
            throw_data("preprocess", "class " + std::to_string(label) + " is empty");
        }
    }

    RandomStream stream(seed, "split");
    SplitIndices split;
    split.seed = seed;
    for (auto& [label, members] : by_class) {
        stream.shuffle(members);
        const double exact = static_cast<double>(members.size()) * train_fraction;
        const auto train_count = static_cast<std::size_t>(std::floor(exact + 1e-9));
        for (std::size_t i = 0; i < members.size(); ++i) {
            (i < train_count ? split.train : split.test).push_back(members[i]);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

namespace {

/// Rotates v so its largest-modulus entry is real and positive; the first
/// index wins modulus ties.
void fix_phase(Eigen::Ref<numerics::ComplexVector> v) {
    Eigen::Index best = 0;
    double best_mod = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mod = std::abs(v(i));
        if (mod > best_mod) {
            best_mod = mod;
            best = i;
        }
    }
    if (best_mod <= 0.0) {
        return;
    }
    const std::complex<double> rotation = std::conj(v(best)) / best_mod;
    v *= rotation;
    v(best) = {v(best).real(), 0.0};
}

void fix_sign(Eigen::Ref<numerics::RealVector> v) {
    Eigen::Index best = 0;
    double best_mod = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mod = std::abs(v(i));
        if (mod > best_mod) {
            best_mod = mod;
            best = i;
        }
    }
    if (v(best) < 0.0) {
        v = -v;
    }
}

}  // namespace

PcaModel pca_fit(const SampleSet& train, int k) {
    const Eigen::Index m = train.count();
    const Eigen::Index d = train.dimension();
    if (m < 2) {
        throw_config("preprocess", "pca_fit requires at least 2 training samples");
    }
    if (k < 1 || k > std::min(m, d)) {
        throw_config("preprocess", "component count " + std::to_string(k) +
                                       " out of range [1, min(d, M)]");
    }

    PcaModel model;
    model.fitted_on = static_cast<std::size_t>(m);
    model.is_complex = train.is_complex;
    model.mean = train.features.colwise().mean().transpose();
    numerics::ComplexMatrix centered = train.features.rowwise() - model.mean.transpose();

    model.components.resize(d, k);
    model.explained_variance.resize(k);
    if (train.is_complex) {
        const numerics::ComplexMatrix covariance =
            (centered.adjoint() * centered) / static_cast<double>(m - 1);
        const numerics::HermitianEig eig = numerics::hermitian_eig(covariance);
        for (int c = 0; c < k; ++c) {
            numerics::ComplexVector column = eig.eigenvectors.col(c);
            fix_phase(column);
            model.components.col(c) = column;
            model.explained_variance(c) = std::max(0.0, eig.eigenvalues(c));
        }
    } else {
        const Eigen::MatrixXd real_centered = centered.real();
        const Eigen::MatrixXd covariance =
            (real_centered.transpose() * real_centered) / static_cast<double>(m - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
        if (solver.info() != Eigen::Success) {
            throw_numeric("preprocess", "PCA covariance eigendecomposition did not converge");
        }
        for (int c = 0; c < k; ++c) {
            numerics::RealVector column = solver.eigenvectors().col(d - 1 - c);
            fix_sign(column);
            model.components.col(c) = column.cast<std::complex<double>>();
            model.explained_variance(c) = std::max(0.0, solver.eigenvalues()(d - 1 - c));
        }
    }
    return model;
}

PcaModel pca_truncate(const PcaModel& model, int k) {
    if (k < 1 || k > model.component_count()) {
        throw_config("preprocess", "truncation count out of range");
    }
    PcaModel out;
    out.mean = model.mean;
    out.components = model.components.leftCols(k);
    out.explained_variance = model.explained_variance.head(k);
    out.fitted_on = model.fitted_on;
    out.is_complex = model.is_complex;
    return out;
}

SampleSet pca_transform(const PcaModel& model, const SampleSet& samples) {
    if (samples.dimension() != model.dimension()) {
        throw_config("preprocess", "sample dimension " + std::to_string(samples.dimension()) +
                                       " does not match PCA dimension " +
                                       std::to_string(model.dimension()));
    }
    SampleSet out;
    const numerics::ComplexMatrix centered = samples.features.rowwise() - model.mean.transpose();
    out.features = centered * model.components.conjugate();
    out.is_complex = model.is_complex || samples.is_complex;
    return out;
}

namespace {

using nlohmann::json;

json interleave(const numerics::ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i).real());
        out.push_back(v(i).imag());
    }
    return out;
}

json interleave(const numerics::ComplexMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out.push_back(m(i, j).real());
            out.push_back(m(i, j).imag());
        }
    }
    return out;
}

}  // namespace

std::string pca_model_to_json(const PcaModel& model) {
    json j;
    j["d"] = model.dimension();
    j["k"] = model.component_count();
    j["fitted_on"] = model.fitted_on;
    j["is_complex"] = model.is_complex;
    j["mean"] = interleave(model.mean);
    j["components"] = interleave(model.components);
    json variance = json::array();
    for (Eigen::Index i = 0; i < model.explained_variance.size(); ++i) {
        variance.push_back(model.explained_variance(i));
    }
    j["explained_variance"] = variance;
    return j.dump();
}

PcaModel pca_model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        PcaModel model;
        const auto d = j.at("d").get<Eigen::Index>();
        const auto k = j.at("k").get<Eigen::Index>();
        model.fitted_on = j.at("fitted_on").get<std::size_t>();
        model.is_complex = j.at("is_complex").get<bool>();
        const auto& mean = j.at("mean");
        if (static_cast<Eigen::Index>(mean.size()) != 2 * d) {
            throw_data("preprocess", "PCA JSON mean length mismatch");
        }
        model.mean.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            model.mean(i) = {mean[2 * i].get<double>(), mean[2 * i + 1].get<double>()};
        }
        const auto& comps = j.at("components");
        if (static_cast<Eigen::Index>(comps.size()) != 2 * d * k) {
            throw_data("preprocess", "PCA JSON components length mismatch");
        }
        model.components.resize(d, k);
        Eigen::Index idx = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index c = 0; c < k; ++c) {
                model.components(i, c) = {comps[idx].get<double>(), comps[idx + 1].get<double>()};
                idx += 2;
            }
        }
        const auto& variance = j.at("explained_variance");
        if (static_cast<Eigen::Index>(variance.size()) != k) {
            throw_data("preprocess", "PCA JSON variance length mismatch");
        }
        model.explained_variance.resize(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            model.explained_variance(i) = variance[i].get<double>();
        }
        return model;
    } catch (const json::exception& e) {
        throw_data("preprocess", std::string("invalid PCA model JSON: ") + e.what());
    }
}

}  // namespace qkmar::preprocess
