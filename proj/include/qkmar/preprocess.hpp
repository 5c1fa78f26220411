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

namespace qkmar::preprocess {

using kernels::SampleSet;

/// h(z) = ln(1 + |z|) e^{i arg z}: compresses the modulus, preserves the
/// phase. Real inputs must be non-negative; arg(0) := 0 so h(0) = 0.
std::complex<double> h_transform(std::complex<double> z);

/// Applies h to every entry of a pixel matrix.
numerics::ComplexMatrix h_transform(const numerics::ComplexMatrix& pixels);

/// Row-major flattening of a chip into one feature vector.
numerics::ComplexVector flatten(const numerics::ComplexMatrix& chip);

/// Result of one stratified train/test split.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

/// Splits indices per class with a seeded shuffle; each class contributes
/// floor(class_size * train_fraction) training members, so balanced inputs
/// split to balanced outputs. Deterministic in (labels, fraction, seed);
/// the shuffle stream is keyed by (seed, "split").
SplitIndices stratified_split(const std::vector<int>& labels, double train_fraction,
                              std::uint64_t seed);

/// Orthogonal projection fitted on training data: mean, top-k eigenvectors of
/// the Hermitian sample covariance, and their eigenvalues.
struct PcaModel {
    numerics::ComplexVector mean;
    numerics::ComplexMatrix components;  // d x k, orthonormal columns
    numerics::RealVector explained_variance;  // length k, descending
    std::size_t fitted_on = 0;
    bool is_complex = false;

    Eigen::Index dimension() const { return mean.size(); }
    Eigen::Index component_count() const { return components.cols(); }
};

/// Fits PCA on a training sample set. Covariance uses the Hermitian form
/// E[(x-mu)(x-mu)^H] with 1/(M-1) normalization. Each component is rotated so
/// its largest-modulus entry is real and positive (ties broken by lowest
/// index), which makes the fit deterministic.
PcaModel pca_fit(const SampleSet& train, int k);

/// First-k truncation of a fitted model; identical to refitting with the
/// smaller k because components are ordered and phase-fixed per column.
PcaModel pca_truncate(const PcaModel& model, int k);

/// components^H (x - mean) per sample. Real model applied to real input
/// yields a real-tagged output.
SampleSet pca_transform(const PcaModel& model, const SampleSet& samples);

std::string pca_model_to_json(const PcaModel& model);
PcaModel pca_model_from_json(const std::string& text);

}  // namespace qkmar::preprocess
