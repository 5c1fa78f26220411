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

#include <string>
#include <vector>

#include "qkmar/numerics.hpp"
#include "qkmar/qsim.hpp"

namespace qkmar::kernels {

/// An ordered set of feature vectors sharing one dimension and one domain.
/// Real samples are stored with zero imaginary parts and is_complex = false;
/// the tag is authoritative, classical kernels reject complex-tagged sets.
struct SampleSet {
    numerics::ComplexMatrix features;  // one sample per row
    bool is_complex = false;

    Eigen::Index count() const { return features.rows(); }
    Eigen::Index dimension() const { return features.cols(); }
};

enum class KernelFamily { linear, rbf, laplacian, quantum };

std::string kernel_family_name(KernelFamily family);
KernelFamily kernel_family_from_name(const std::string& name);

/// Identifies one kernel function: a classical family with its gamma, or a
/// quantum family wrapping an encoding circuit.
struct KernelSpec {
    KernelFamily family = KernelFamily::linear;
    double gamma = 0.0;  // rbf / laplacian only
    qsim::EncodingSpec encoding;  // quantum only

    static KernelSpec make_linear();
    static KernelSpec make_rbf(double gamma);
    static KernelSpec make_laplacian(double gamma);
    static KernelSpec make_quantum(const qsim::EncodingSpec& encoding);
};

void validate(const KernelSpec& spec);
bool is_quantum(const KernelSpec& spec);

std::string kernel_spec_to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const std::string& text);

/// Euclidean inner product, Eq-style sum over entries. Real inputs only.
double linear(const numerics::RealVector& x, const numerics::RealVector& x_prime);

/// exp(-gamma * ||x - x'||^2).
double rbf(const numerics::RealVector& x, const numerics::RealVector& x_prime, double gamma);

/// exp(-gamma * ||x - x'||_1).
double laplacian(const numerics::RealVector& x, const numerics::RealVector& x_prime, double gamma);

/// Entrywise beta * x for beta > 0; complex arguments keep their phase.
numerics::ComplexVector bandwidth_scale(const numerics::ComplexVector& x, double beta);
numerics::RealVector bandwidth_scale(const numerics::RealVector& x, double beta);

/// Symmetric PSD matrix of pairwise kernel values over one sample set.
struct GramMatrix {
    numerics::RealMatrix matrix;
    KernelSpec kernel;
    std::vector<std::string> sample_ids;
};

/// Pairwise kernel values K_ij = k(x_i, x_j); only j >= i is evaluated and
/// mirrored. The quantum variant encodes each sample exactly once and forms
/// the matrix from cached statevectors. Entries may be computed in parallel;
/// the result is independent of the worker count.
GramMatrix gram(const KernelSpec& spec, const SampleSet& samples,
                const std::vector<std::string>& sample_ids = {}, int workers = 1);

/// Rectangular matrix of kernel values between two sample sets,
/// entry (i, j) = k(a_i, b_j).
numerics::RealMatrix cross_gram(const KernelSpec& spec, const SampleSet& a, const SampleSet& b,
                                int workers = 1);

/// Binary Gram file: magic "QKGM", version byte, u32 rows, u32 cols,
/// length-prefixed kernel-spec JSON, then row-major little-endian f64.
void write_gram(const std::string& path, const GramMatrix& gram);
GramMatrix read_gram(const std::string& path);

}  // namespace qkmar::kernels
