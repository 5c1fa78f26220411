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

#include "qkmar/numerics.hpp"

#include <algorithm>
#include <numeric>

namespace qkmar::numerics {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;

}  // namespace

double hermitian_defect(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw_numeric("numerics", "matrix is not square");
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double symmetry_defect(const RealMatrix& a) {
    if (a.rows() != a.cols()) {
        throw_numeric("numerics", "matrix is not square");
    }
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw_numeric("numerics", "hermitian_eig requires a square matrix");
    }
    if (a.size() == 0) {
        throw_numeric("numerics", "hermitian_eig requires a non-empty matrix");
    }
    if (hermitian_defect(a) > kHermitianTolerance) {
        throw_numeric("numerics", "hermitian_eig input is not Hermitian within 1e-10");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw_numeric("numerics", "Hermitian eigendecomposition did not converge");
    }

    // Eigen sorts ascending; the contract is descending.
    const Eigen::Index n = a.rows();
    HermitianEig result;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        result.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        result.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return result;
}

RealVector solve_spd(const RealMatrix& a, const RealVector& b) {
    if (a.rows() != a.cols()) {
        throw_numeric("numerics", "solve_spd requires a square matrix");
    }
    if (a.rows() != b.size()) {
        throw_numeric("numerics", "solve_spd dimension mismatch between matrix and vector");
    }
    if (symmetry_defect(a) > kHermitianTolerance) {
        throw_numeric("numerics", "solve_spd input is not symmetric within 1e-10");
    }

    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw_numeric("numerics",
                      "Cholesky factorization failed: matrix is not positive definite "
                      "(insufficient regularisation)");
    }

    RealVector x = llt.solve(b);
    const double bound = kResidualTolerance * (1.0 + b.cwiseAbs().maxCoeff());
    RealVector residual = b - a * x;
    if (residual.cwiseAbs().maxCoeff() > 0.5 * bound) {
        // One step of iterative refinement recovers the contract on
        // ill-conditioned but factorizable inputs.
        x += llt.solve(residual);
        residual = b - a * x;
        if (residual.cwiseAbs().maxCoeff() > bound) {
            throw_numeric("numerics",
                          "solve_spd residual exceeds tolerance (insufficient regularisation)");
        }
    }
    return x;
}

double min_eigenvalue(const RealMatrix& a) {
    if (a.rows() != a.cols()) {
        throw_numeric("numerics", "min_eigenvalue requires a square matrix");
    }
    if (a.size() == 0) {
        throw_numeric("numerics", "min_eigenvalue requires a non-empty matrix");
    }
    if (symmetry_defect(a) > kHermitianTolerance) {
        throw_numeric("numerics", "min_eigenvalue input is not symmetric within 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw_numeric("numerics", "symmetric eigendecomposition did not converge");
    }
    return solver.eigenvalues().minCoeff();
}

}  // namespace qkmar::numerics
