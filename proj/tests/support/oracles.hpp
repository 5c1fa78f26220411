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

// Independent reference implementations used only by tests. Each oracle
// deliberately takes a different algorithmic route than the library path it
// checks.

#pragma once

#include <vector>

#include "qkmar/common.hpp"
#include "qkmar/numerics.hpp"

namespace qkmar::testing {

/// Full spectrum of a Hermitian matrix by cyclic Jacobi rotations, sorted
/// descending. Checks hermitian_eig, which goes through tridiagonalization.
std::vector<double> jacobi_eigenvalues(numerics::ComplexMatrix a);

/// Soft-margin SVC dual solved by accelerated projected gradient descent
/// with an exact bisection projection onto the box-plus-hyperplane feasible
/// set. Checks the SMO path.
struct QpSolution {
    std::vector<double> alphas;
    double objective = 0.0;  // maximization form: sum(alpha) - 1/2 a'Qa
};
QpSolution qp_svc_dual(const numerics::RealMatrix& kernel, const std::vector<int>& labels,
                       double c, std::size_t max_iterations = 300000);

/// Dot product accumulated in extended precision.
double compensated_dot(const numerics::RealVector& x, const numerics::RealVector& y);

/// Random matrices for property tests.
numerics::ComplexMatrix random_hermitian(RandomStream& stream, int n, double scale = 1.0);
numerics::RealMatrix random_spd(RandomStream& stream, int n);
numerics::RealVector random_real_vector(RandomStream& stream, int n, double lo = -1.0,
                                        double hi = 1.0);
numerics::ComplexVector random_complex_vector(RandomStream& stream, int n, double radius = 1.0);

}  // namespace qkmar::testing
