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

#include "oracles.hpp"
#include "qkmar/numerics.hpp"

using namespace qkmar;
using namespace qkmar::numerics;
using qkmar::testing::jacobi_eigenvalues;
using qkmar::testing::random_hermitian;
using qkmar::testing::random_spd;

TEST_CASE("hermitian_eig identity spectrum") {
    const ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    const HermitianEig eig = hermitian_eig(a);
    for (int i = 0; i < 3; ++i) {
        CHECK(eig.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("hermitian_eig diagonal case sorts descending") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = -1.0;
    const HermitianEig eig = hermitian_eig(a);
    CHECK(eig.eigenvalues(0) == doctest::Approx(2.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(-1.0));
    // Eigenvectors are permuted identity columns up to phase.
    CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.eigenvectors(1, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig matches the Jacobi oracle on random matrices") {
    RandomStream stream(2024, "numerics-eig");
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 5;
        const ComplexMatrix a = random_hermitian(stream, n);
        const HermitianEig eig = hermitian_eig(a);
        const std::vector<double> oracle = jacobi_eigenvalues(a);
        for (int i = 0; i < n; ++i) {
            CHECK(eig.eigenvalues(i) ==
                  doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-8));
        }
    }
}

TEST_CASE("hermitian_eig orthonormality and reconstruction") {
    RandomStream stream(99, "numerics-recon");
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6;
        const ComplexMatrix a = random_hermitian(stream, n, 3.0);
        const HermitianEig eig = hermitian_eig(a);

        const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
        CHECK((gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);

        ComplexMatrix reconstructed = ComplexMatrix::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            reconstructed +=
                eig.eigenvalues(k) * (eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint());
        }
        CHECK((reconstructed - a).cwiseAbs().maxCoeff() <= 1e-8);

        for (int k = 0; k < n; ++k) {
            const ComplexVector residual =
                a * eig.eigenvectors.col(k) - eig.eigenvalues(k) * eig.eigenvectors.col(k);
            CHECK(residual.cwiseAbs().maxCoeff() <=
                  1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    ComplexMatrix a(2, 2);
    a << 1.0, std::complex<double>(0.0, 1.0), std::complex<double>(0.0, 1.0), 1.0;
    CHECK_THROWS_AS(hermitian_eig(a), Error);

    const ComplexMatrix rect = ComplexMatrix::Zero(2, 3);
    CHECK_THROWS_AS(hermitian_eig(rect), Error);
}

TEST_CASE("solve_spd identity and diagonal") {
    const RealMatrix identity = RealMatrix::Identity(2, 2);
    RealVector b(2);
    b << 3.0, -4.0;
    RealVector x = solve_spd(identity, b);
    CHECK(x(0) == doctest::Approx(3.0));
    CHECK(x(1) == doctest::Approx(-4.0));

    RealMatrix diag = RealMatrix::Zero(2, 2);
    diag(0, 0) = 2.0;
    diag(1, 1) = 4.0;
    RealVector b2(2);
    b2 << 2.0, 2.0;
    x = solve_spd(diag, b2);
    CHECK(x(0) == doctest::Approx(1.0));
    CHECK(x(1) == doctest::Approx(0.5));
}

TEST_CASE("solve_spd residual bound on random SPD systems") {
    RandomStream stream(7, "numerics-spd");
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6;
        const RealMatrix a = random_spd(stream, n);
        const RealVector b = qkmar::testing::random_real_vector(stream, n, -2.0, 2.0);
        const RealVector x = solve_spd(a, b);
        const double residual = (a * x - b).cwiseAbs().maxCoeff();
        CHECK(residual <= 1e-8 * (1.0 + b.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("solve_spd rejects non-positive-definite matrices") {
    RealMatrix a(2, 2);
    a << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    RealVector b(2);
    b << 1.0, 1.0;
    CHECK_THROWS_WITH_AS(solve_spd(a, b), doctest::Contains("insufficient regularisation"),
                         Error);
}

TEST_CASE("solve_spd rejects asymmetric input") {
    RealMatrix a(2, 2);
    a << 1.0, 0.5, 0.0, 1.0;
    const RealVector b = RealVector::Ones(2);
    CHECK_THROWS_AS(solve_spd(a, b), Error);
}

TEST_CASE("min_eigenvalue closed forms") {
    CHECK(min_eigenvalue(RealMatrix::Identity(2, 2)) == doctest::Approx(1.0));
    RealMatrix flip(2, 2);
    flip << 0.0, 1.0, 1.0, 0.0;
    CHECK(min_eigenvalue(flip) == doctest::Approx(-1.0));
}

TEST_CASE("min_eigenvalue agrees with the Jacobi oracle") {
    RandomStream stream(31, "numerics-mineig");
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 7;
        RealMatrix a(n, n);
        for (int i = 0; i < n; ++i) {
            a(i, i) = stream.next_double(-1.0, 1.0);
            for (int j = i + 1; j < n; ++j) {
                a(i, j) = a(j, i) = stream.next_double(-1.0, 1.0);
            }
        }
        const std::vector<double> oracle = jacobi_eigenvalues(a.cast<std::complex<double>>());
        CHECK(min_eigenvalue(a) == doctest::Approx(oracle.back()).epsilon(1e-8));
    }
}
