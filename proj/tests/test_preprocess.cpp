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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qkmar/preprocess.hpp"

using namespace qkmar;
using namespace qkmar::preprocess;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using numerics::RealVector;

namespace {

SampleSet make_real_samples(const Eigen::MatrixXd& x) {
    SampleSet samples;
    samples.is_complex = false;
    samples.features = x.cast<std::complex<double>>();
    return samples;
}

}  // namespace

TEST_CASE("h_transform closed forms") {
    CHECK(h_transform({0.0, 0.0}) == std::complex<double>(0.0, 0.0));

    const std::complex<double> real_case = h_transform({std::exp(1.0) - 1.0, 0.0});
    CHECK(real_case.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(real_case.imag() == 0.0);

    const std::complex<double> down = h_transform({0.0, -3.0});
    CHECK(std::abs(down) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(std::arg(down) == doctest::Approx(-M_PI / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(h_transform({-1.0, 0.0}), Error);
}

TEST_CASE("h_transform preserves phase and compresses modulus monotonically") {
    RandomStream stream(3, "pre-h");
    double previous_abs = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
        const std::complex<double> z = {stream.next_double(-100.0, 100.0),
                                        stream.next_double(-100.0, 100.0)};
        if (std::abs(z) == 0.0) {
            continue;
        }
        const std::complex<double> h = h_transform(z);
        CHECK(std::abs(std::arg(h) - std::arg(z)) <= 1e-12);
        CHECK(std::abs(std::abs(h) - std::log1p(std::abs(z))) <= 1e-12);
        (void)previous_abs;
    }
    // Monotone in |z| along a ray.
    double last = -1.0;
    for (double r = 0.5; r < 50.0; r *= 1.7) {
        const double m = std::abs(h_transform(std::polar(r, 1.1)));
        CHECK(m > last);
        last = m;
    }
}

TEST_CASE("flatten is row-major") {
    ComplexMatrix chip(2, 2);
    chip << 1.0, 2.0, 3.0, 4.0;
    const ComplexVector flat = flatten(chip);
    CHECK(flat(0).real() == 1.0);
    CHECK(flat(1).real() == 2.0);
    CHECK(flat(2).real() == 3.0);
    CHECK(flat(3).real() == 4.0);

    CHECK(flatten(ComplexMatrix::Zero(16, 16)).size() == 256);
    CHECK(flatten(ComplexMatrix::Zero(70, 12)).size() == 840);
    CHECK_THROWS_AS(flatten(ComplexMatrix()), Error);
}

TEST_CASE("stratified_split reproduces the published counts") {
    std::vector<int> labels;
    for (int i = 0; i < 625; ++i) {
        labels.push_back(1);
        labels.push_back(-1);
    }
    const SplitIndices split = stratified_split(labels, 0.8, 99);
    CHECK(split.train.size() == 1000);
    CHECK(split.test.size() == 250);
    int train_pos = 0;
    for (std::size_t i : split.train) {
        train_pos += labels[i] == 1 ? 1 : 0;
    }
    int test_pos = 0;
    for (std::size_t i : split.test) {
        test_pos += labels[i] == 1 ? 1 : 0;
    }
    CHECK(train_pos == 500);
    CHECK(test_pos == 125);
}

TEST_CASE("stratified_split is a bijection and is deterministic") {
    const std::vector<int> labels = {1, -1, 1, -1};
    const SplitIndices split = stratified_split(labels, 0.5, 7);
    CHECK(split.train.size() == 2);
    CHECK(split.test.size() == 2);
    std::set<std::size_t> all(split.train.begin(), split.train.end());
    all.insert(split.test.begin(), split.test.end());
    CHECK(all.size() == 4);
    // One member per class on each side.
    CHECK(labels[split.train[0]] + labels[split.train[1]] == 0);
    CHECK(labels[split.test[0]] + labels[split.test[1]] == 0);

    for (int rep = 0; rep < 100; ++rep) {
        const SplitIndices again = stratified_split(labels, 0.5, 7);
        CHECK(again.train == split.train);
        CHECK(again.test == split.test);
    }
    const SplitIndices other_seed = stratified_split(labels, 0.5, 8);
    CHECK(other_seed.train.size() == split.train.size());
}

TEST_CASE("stratified_split validates inputs") {
    CHECK_THROWS_AS(stratified_split({}, 0.5, 1), Error);
    CHECK_THROWS_AS(stratified_split({1, -1}, 0.0, 1), Error);
    CHECK_THROWS_AS(stratified_split({1, -1}, 1.0, 1), Error);
}

TEST_CASE("pca_fit on a line through the origin captures all variance") {
    Eigen::MatrixXd x(6, 3);
    const Eigen::Vector3d direction(1.0, 2.0, -2.0);
    for (int i = 0; i < 6; ++i) {
        x.row(i) = ((i - 2.5) * direction).transpose();
    }
    const PcaModel model = pca_fit(make_real_samples(x), 1);

    double total_variance = 0.0;
    const Eigen::RowVector3d mean = x.colwise().mean();
    for (int i = 0; i < 6; ++i) {
        total_variance += (x.row(i) - mean).squaredNorm();
    }
    total_variance /= 5.0;
    CHECK(model.explained_variance(0) == doctest::Approx(total_variance).epsilon(1e-10));

    // Component is proportional to the line direction.
    const Eigen::Vector3d component = model.components.col(0).real();
    const double cosine = std::abs(component.dot(direction.normalized()));
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pca_fit matches an SVD oracle on real data up to sign") {
    RandomStream stream(17, "pre-svd");
    const int m = 40;
    const int d = 7;
    Eigen::MatrixXd x(m, d);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            x(i, j) = stream.next_double(-2.0, 2.0) + 0.3 * j;
        }
    }
    const int k = 4;
    const PcaModel model = pca_fit(make_real_samples(x), k);

    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    for (int c = 0; c < k; ++c) {
        const double sigma = svd.singularValues()(c);
        CHECK(model.explained_variance(c) ==
              doctest::Approx(sigma * sigma / (m - 1)).epsilon(1e-8));
        const Eigen::VectorXd oracle = svd.matrixV().col(c);
        const Eigen::VectorXd mine = model.components.col(c).real();
        const double diff_plus = (mine - oracle).cwiseAbs().maxCoeff();
        const double diff_minus = (mine + oracle).cwiseAbs().maxCoeff();
        CHECK(std::min(diff_plus, diff_minus) <= 1e-8);
    }
}

TEST_CASE("pca_fit complex orthonormality and deterministic phase convention") {
    RandomStream stream(23, "pre-complex");
    SampleSet samples;
    samples.is_complex = true;
    samples.features.resize(30, 5);
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 5; ++j) {
            samples.features(i, j) = {stream.next_double(-1.0, 1.0),
                                      stream.next_double(-1.0, 1.0)};
        }
    }
    const PcaModel model = pca_fit(samples, 2);
    const ComplexMatrix gram = model.components.adjoint() * model.components;
    CHECK((gram - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-8);

    // Largest-modulus entry of each component is real positive.
    for (int c = 0; c < 2; ++c) {
        Eigen::Index best = 0;
        double best_mod = -1.0;
        for (Eigen::Index i = 0; i < 5; ++i) {
            if (std::abs(model.components(i, c)) > best_mod) {
                best_mod = std::abs(model.components(i, c));
                best = i;
            }
        }
        CHECK(model.components(best, c).imag() == 0.0);
        CHECK(model.components(best, c).real() > 0.0);
    }

    const PcaModel again = pca_fit(samples, 2);
    CHECK((again.components - model.components).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pca_truncate equals refitting with smaller k") {
    RandomStream stream(27, "pre-trunc");
    Eigen::MatrixXd x(25, 6);
    for (int i = 0; i < 25; ++i) {
        for (int j = 0; j < 6; ++j) {
            x(i, j) = stream.next_double(-1.0, 1.0);
        }
    }
    const SampleSet samples = make_real_samples(x);
    const PcaModel full = pca_fit(samples, 5);
    const PcaModel truncated = pca_truncate(full, 2);
    const PcaModel refit = pca_fit(samples, 2);
    CHECK((truncated.components - refit.components).cwiseAbs().maxCoeff() == 0.0);
    CHECK((truncated.explained_variance - refit.explained_variance).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pca_transform maps the mean to zero and reconstructs at full rank") {
    RandomStream stream(29, "pre-transform");
    Eigen::MatrixXd x(20, 4);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 4; ++j) {
            x(i, j) = stream.next_double(-3.0, 3.0);
        }
    }
    const SampleSet samples = make_real_samples(x);
    const PcaModel model = pca_fit(samples, 4);

    SampleSet mean_only;
    mean_only.is_complex = false;
    mean_only.features.resize(1, 4);
    mean_only.features.row(0) = model.mean.transpose();
    const SampleSet projected_mean = pca_transform(model, mean_only);
    CHECK(projected_mean.features.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(projected_mean.is_complex);

    // Full-rank isometry: components * y + mean == x.
    const SampleSet projected = pca_transform(model, samples);
    for (int i = 0; i < 20; ++i) {
        const ComplexVector reconstructed =
            model.components * projected.features.row(i).transpose() + model.mean;
        CHECK((reconstructed - samples.features.row(i).transpose()).cwiseAbs().maxCoeff() <=
              1e-8);
    }
}

TEST_CASE("projected training coordinates have the fitted variance and are uncorrelated") {
    RandomStream stream(31, "pre-var");
    Eigen::MatrixXd x(60, 5);
    for (int i = 0; i < 60; ++i) {
        for (int j = 0; j < 5; ++j) {
            x(i, j) = stream.next_double(-1.0, 1.0) * (j + 1);
        }
    }
    const SampleSet samples = make_real_samples(x);
    const int k = 3;
    const PcaModel model = pca_fit(samples, k);
    const SampleSet projected = pca_transform(model, samples);

    const Eigen::MatrixXd y = projected.features.real();
    const Eigen::MatrixXd centered = y.rowwise() - y.colwise().mean();
    const Eigen::MatrixXd covariance = centered.transpose() * centered / (60.0 - 1.0);
    for (int c = 0; c < k; ++c) {
        CHECK(covariance(c, c) == doctest::Approx(model.explained_variance(c)).epsilon(1e-8));
        for (int c2 = 0; c2 < k; ++c2) {
            if (c2 != c) {
                CHECK(std::abs(covariance(c, c2)) <=
                      1e-8 * std::max(1.0, covariance(c, c)));
            }
        }
    }
}

TEST_CASE("pca_fit validates its preconditions") {
    RandomStream stream(37, "pre-valid");
    Eigen::MatrixXd x(5, 3);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 3; ++j) {
            x(i, j) = stream.next_double(0.0, 1.0);
        }
    }
    const SampleSet samples = make_real_samples(x);
    CHECK_THROWS_AS(pca_fit(samples, 0), Error);
    CHECK_THROWS_AS(pca_fit(samples, 4), Error);

    SampleSet tiny;
    tiny.is_complex = false;
    tiny.features.resize(1, 3);
    tiny.features.setZero();
    CHECK_THROWS_AS(pca_fit(tiny, 1), Error);

    const PcaModel model = pca_fit(samples, 2);
    SampleSet wrong_dim;
    wrong_dim.is_complex = false;
    wrong_dim.features.resize(2, 4);
    wrong_dim.features.setZero();
    CHECK_THROWS_AS(pca_transform(model, wrong_dim), Error);
}

TEST_CASE("PcaModel JSON round-trip") {
    RandomStream stream(41, "pre-json");
    SampleSet samples;
    samples.is_complex = true;
    samples.features.resize(12, 4);
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 4; ++j) {
            samples.features(i, j) = {stream.next_double(-1.0, 1.0),
                                      stream.next_double(-1.0, 1.0)};
        }
    }
    const PcaModel model = pca_fit(samples, 3);
    const PcaModel loaded = pca_model_from_json(pca_model_to_json(model));
    CHECK(loaded.dimension() == model.dimension());
    CHECK(loaded.component_count() == model.component_count());
    CHECK(loaded.is_complex == model.is_complex);
    CHECK(loaded.fitted_on == model.fitted_on);
    CHECK((loaded.mean - model.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.components - model.components).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.explained_variance - model.explained_variance).cwiseAbs().maxCoeff() == 0.0);
}
