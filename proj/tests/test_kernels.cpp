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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "qkmar/kernels.hpp"

using namespace qkmar;
using namespace qkmar::kernels;
using numerics::ComplexVector;
using numerics::RealVector;

namespace {

SampleSet random_real_samples(RandomStream& stream, int count, int dim) {
    SampleSet samples;
    samples.is_complex = false;
    samples.features.resize(count, dim);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < dim; ++j) {
            samples.features(i, j) = {stream.next_double(-1.5, 1.5), 0.0};
        }
    }
    return samples;
}

SampleSet random_complex_samples(RandomStream& stream, int count, int dim) {
    SampleSet samples;
    samples.is_complex = true;
    samples.features.resize(count, dim);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < dim; ++j) {
            samples.features(i, j) = {stream.next_double(-1.5, 1.5),
                                      stream.next_double(-1.5, 1.5)};
        }
    }
    return samples;
}

}  // namespace

TEST_CASE("linear kernel closed forms and oracle") {
    RealVector e1(2), e2(2);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    CHECK(linear(e1, e2) == 0.0);

    RealVector a(2), b(2);
    a << 1.0, 2.0;
    b << 3.0, 4.0;
    CHECK(linear(a, b) == doctest::Approx(11.0));

    RandomStream stream(3, "kernels-linear");
    for (int trial = 0; trial < 50; ++trial) {
        const RealVector x = qkmar::testing::random_real_vector(stream, 20, -5.0, 5.0);
        const RealVector y = qkmar::testing::random_real_vector(stream, 20, -5.0, 5.0);
        CHECK(linear(x, y) ==
              doctest::Approx(qkmar::testing::compensated_dot(x, y)).epsilon(1e-12));
    }

    RealVector short_vec(1);
    short_vec << 1.0;
    CHECK_THROWS_AS(linear(a, short_vec), Error);
}

TEST_CASE("rbf kernel closed forms") {
    RealVector x(3);
    x << 0.3, -0.7, 1.1;
    CHECK(rbf(x, x, 2.5) == doctest::Approx(1.0));

    RealVector origin(1), unit(1);
    origin << 0.0;
    unit << 1.0;
    CHECK(rbf(origin, unit, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    RandomStream stream(5, "kernels-rbf");
    const double gamma = 0.03162277660168379;
    for (int trial = 0; trial < 20; ++trial) {
        const RealVector a = qkmar::testing::random_real_vector(stream, 6);
        const RealVector b = qkmar::testing::random_real_vector(stream, 6);
        double dist2 = 0.0;
        for (int i = 0; i < 6; ++i) {
            dist2 += (a(i) - b(i)) * (a(i) - b(i));
        }
        CHECK(rbf(a, b, gamma) == doctest::Approx(std::exp(-gamma * dist2)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(rbf(x, x, 0.0), Error);
}

TEST_CASE("laplacian kernel closed forms") {
    RealVector x(2);
    x << 0.4, 0.6;
    CHECK(laplacian(x, x, 0.1) == doctest::Approx(1.0));

    RealVector a(1), b(1);
    a << 0.0;
    b << 10.0;
    CHECK(laplacian(a, b, 0.1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    RandomStream stream(11, "kernels-lap");
    for (int trial = 0; trial < 20; ++trial) {
        const RealVector u = qkmar::testing::random_real_vector(stream, 5);
        const RealVector v = qkmar::testing::random_real_vector(stream, 5);
        double l1 = 0.0;
        for (int i = 0; i < 5; ++i) {
            l1 += std::abs(u(i) - v(i));
        }
        CHECK(laplacian(u, v, 0.7) == doctest::Approx(std::exp(-0.7 * l1)).epsilon(1e-12));
    }
}

TEST_CASE("bandwidth_scale scales moduli and keeps phases") {
    RealVector x(2);
    x << 2.0, -4.0;
    const RealVector scaled = bandwidth_scale(x, 0.5);
    CHECK(scaled(0) == doctest::Approx(1.0));
    CHECK(scaled(1) == doctest::Approx(-2.0));

    ComplexVector z(1);
    z(0) = std::polar(2.0, M_PI / 3.0);
    const ComplexVector zs = bandwidth_scale(z, 0.3);
    CHECK(std::abs(zs(0)) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(std::arg(zs(0)) == doctest::Approx(M_PI / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(bandwidth_scale(x, 0.0), Error);
    CHECK_THROWS_AS(bandwidth_scale(x, -1.0), Error);
}

TEST_CASE("gram single sample and hand-computed linear case") {
    RandomStream stream(13, "kernels-gram1");
    const SampleSet one = random_real_samples(stream, 1, 4);
    const GramMatrix g = gram(KernelSpec::make_rbf(0.5), one);
    CHECK(g.matrix.rows() == 1);
    CHECK(g.matrix(0, 0) == doctest::Approx(1.0));

    SampleSet three;
    three.is_complex = false;
    three.features.resize(3, 2);
    three.features << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
    const GramMatrix gl = gram(KernelSpec::make_linear(), three);
    numerics::RealMatrix expected(3, 3);
    expected << 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 2.0;
    CHECK((gl.matrix - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("quantum gram equals the pairwise kernel oracle and is PSD") {
    RandomStream stream(17, "kernels-qgram");
    qsim::EncodingSpec encoding{qsim::CircuitFamily::Ry1DSt, 2, 2, 0.6};
    const KernelSpec spec = KernelSpec::make_quantum(encoding);
    const SampleSet samples = random_real_samples(stream, 10, 2);
    const GramMatrix g = gram(spec, samples);
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const ComplexVector xi = samples.features.row(i).transpose();
            const ComplexVector xj = samples.features.row(j).transpose();
            CHECK(std::abs(g.matrix(i, j) - qsim::kernel_value(encoding, xi, xj)) <= 1e-12);
        }
    }
    CHECK(numerics::min_eigenvalue(g.matrix) >= -1e-8);
}

TEST_CASE("gram symmetry, PSD, and unit diagonal across variants") {
    RandomStream stream(19, "kernels-psd");
    qsim::EncodingSpec encoding{qsim::CircuitFamily::RyRz1DAlt, 3, 2, 0.4};
    const std::vector<KernelSpec> specs = {
        KernelSpec::make_linear(), KernelSpec::make_rbf(0.7), KernelSpec::make_laplacian(0.3),
        KernelSpec::make_quantum(encoding)};
    for (const KernelSpec& spec : specs) {
        for (int trial = 0; trial < 5; ++trial) {
            const int m = 4 + static_cast<int>(stream.next_below(12));
            const SampleSet samples = random_real_samples(stream, m, 3);
            const GramMatrix g = gram(spec, samples);
            CHECK(numerics::symmetry_defect(g.matrix) <= 1e-10);
            CHECK(numerics::min_eigenvalue(g.matrix) >= -1e-8);
            if (spec.family != KernelFamily::linear) {
                for (int i = 0; i < m; ++i) {
                    CHECK(std::abs(g.matrix(i, i) - 1.0) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("quantum gram with bandwidth equals gram of pre-scaled inputs") {
    RandomStream stream(23, "kernels-beta");
    const double beta = 0.35;
    qsim::EncodingSpec with_beta{qsim::CircuitFamily::Ry1DSt, 3, 2, beta};
    qsim::EncodingSpec unit_beta{qsim::CircuitFamily::Ry1DSt, 3, 2, 1.0};

    SampleSet samples = random_real_samples(stream, 8, 3);
    SampleSet scaled = samples;
    for (int i = 0; i < 8; ++i) {
        scaled.features.row(i) = bandwidth_scale(
            ComplexVector(samples.features.row(i).transpose()), beta).transpose();
    }
    const GramMatrix a = gram(KernelSpec::make_quantum(with_beta), samples);
    const GramMatrix b = gram(KernelSpec::make_quantum(unit_beta), scaled);
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("classical kernels reject complex-tagged samples") {
    RandomStream stream(29, "kernels-domain");
    const SampleSet samples = random_complex_samples(stream, 4, 2);
    CHECK_THROWS_AS(gram(KernelSpec::make_linear(), samples), Error);
    CHECK_THROWS_AS(gram(KernelSpec::make_rbf(1.0), samples), Error);
    qsim::EncodingSpec real_only{qsim::CircuitFamily::Ry1DSt, 2, 2, 0.5};
    CHECK_THROWS_AS(gram(KernelSpec::make_quantum(real_only), samples), Error);
    qsim::EncodingSpec complex_ok{qsim::CircuitFamily::CRyRz1DSt, 2, 2, 0.5};
    CHECK_NOTHROW(gram(KernelSpec::make_quantum(complex_ok), samples));
}

TEST_CASE("cross_gram consistency with gram and transpose symmetry") {
    RandomStream stream(31, "kernels-cross");
    const KernelSpec spec = KernelSpec::make_rbf(0.8);
    const SampleSet a = random_real_samples(stream, 6, 3);
    const SampleSet b = random_real_samples(stream, 4, 3);

    const numerics::RealMatrix self = cross_gram(spec, a, a);
    const GramMatrix g = gram(spec, a);
    CHECK((self - g.matrix).cwiseAbs().maxCoeff() <= 1e-14);

    const numerics::RealMatrix ab = cross_gram(spec, a, b);
    const numerics::RealMatrix ba = cross_gram(spec, b, a);
    CHECK((ab - ba.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

    SampleSet one;
    one.is_complex = false;
    one.features.resize(1, 2);
    one.features << 1.0, 1.0;
    SampleSet two;
    two.is_complex = false;
    two.features.resize(2, 2);
    two.features << 1.0, 0.0, 0.0, 2.0;
    const numerics::RealMatrix lin = cross_gram(KernelSpec::make_linear(), one, two);
    CHECK(lin(0, 0) == doctest::Approx(1.0));
    CHECK(lin(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("gram is independent of the worker count") {
    RandomStream stream(37, "kernels-par");
    qsim::EncodingSpec encoding{qsim::CircuitFamily::Ry1DSt, 3, 2, 0.5};
    const KernelSpec spec = KernelSpec::make_quantum(encoding);
    const SampleSet samples = random_real_samples(stream, 12, 3);
    const GramMatrix serial = gram(spec, samples, {}, 1);
    const GramMatrix parallel = gram(spec, samples, {}, 4);
    CHECK((serial.matrix - parallel.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("QKGM round-trip is bitwise exact") {
    RandomStream stream(41, "kernels-io");
    qsim::EncodingSpec encoding{qsim::CircuitFamily::CRyRz1DSt, 2, 3, 0.25};
    const KernelSpec spec = KernelSpec::make_quantum(encoding);
    const SampleSet samples = random_complex_samples(stream, 7, 2);
    const GramMatrix original = gram(spec, samples);

    const std::string path =
        (std::filesystem::temp_directory_path() / "qkmar_test_gram.qkgm").string();
    write_gram(path, original);
    const GramMatrix loaded = read_gram(path);
    CHECK(loaded.matrix.rows() == original.matrix.rows());
    CHECK((loaded.matrix - original.matrix).cwiseAbs().maxCoeff() == 0.0);
    CHECK(loaded.kernel.family == KernelFamily::quantum);
    CHECK(loaded.kernel.encoding.family == qsim::CircuitFamily::CRyRz1DSt);
    CHECK(loaded.kernel.encoding.bandwidth == 0.25);
    std::filesystem::remove(path);
}

TEST_CASE("read_gram rejects corrupted files") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "qkmar_bad.qkgm").string();
    {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fputs("NOPE", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_gram(path), Error);
    fs::remove(path);
    CHECK_THROWS_AS(read_gram(path), Error);  // missing file
}

TEST_CASE("kernel spec JSON round-trips") {
    const KernelSpec rbf_spec = KernelSpec::make_rbf(0.03162277660168379);
    const KernelSpec back = kernel_spec_from_json(kernel_spec_to_json(rbf_spec));
    CHECK(back.family == KernelFamily::rbf);
    CHECK(back.gamma == rbf_spec.gamma);

    qsim::EncodingSpec encoding{qsim::CircuitFamily::RyRz1DAlt, 5, 4, 0.2};
    const KernelSpec q = KernelSpec::make_quantum(encoding);
    const KernelSpec qback = kernel_spec_from_json(kernel_spec_to_json(q));
    CHECK(qback.encoding.family == qsim::CircuitFamily::RyRz1DAlt);
    CHECK(qback.encoding.qubits == 5);
    CHECK(qback.encoding.layers == 4);
    CHECK(qback.encoding.bandwidth == 0.2);

    CHECK_THROWS_AS(kernel_spec_from_json("{"), Error);
    CHECK_THROWS_AS(kernel_spec_from_json(R"({"family":"poly"})"), Error);
}
