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

#include <Eigen/Dense>
#include <complex>

#include "qkmar/common.hpp"

namespace qkmar::numerics {

// Row-major storage so that .data() matches the row-major file formats.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Full spectrum of a Hermitian matrix. Eigenvalues are sorted descending and
/// the eigenvector columns are orthonormal. For repeated eigenvalues only the
/// spanned invariant subspace is meaningful, not individual columns.
struct HermitianEig {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Largest absolute deviation from Hermitian symmetry, max |A - A^H|.
double hermitian_defect(const ComplexMatrix& a);

/// Largest absolute deviation from real symmetry, max |A - A^T|.
double symmetry_defect(const RealMatrix& a);

/// Eigendecomposition of a Hermitian matrix. The input must be square and
/// Hermitian within 1e-10 max-norm.
HermitianEig hermitian_eig(const ComplexMatrix& a);

/// Solves A x = b for symmetric positive-definite A via Cholesky
/// factorization. The solution satisfies
/// max |A x - b| <= 1e-8 * (1 + max |b|); a failed factorization reports
/// insufficient regularisation.
RealVector solve_spd(const RealMatrix& a, const RealVector& b);

/// Smallest eigenvalue of a symmetric matrix (symmetric within 1e-10).
double min_eigenvalue(const RealMatrix& a);

}  // namespace qkmar::numerics
