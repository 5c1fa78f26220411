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
#include <optional>
#include <string>
#include <vector>

#include "qkmar/numerics.hpp"

namespace qkmar::data {

/// One SAR image patch. GRD chips carry unsigned 16-bit intensities, SLC
/// chips interleaved signed 16-bit complex values; both are promoted to
/// 64-bit on load and stay integer-valued so writes are lossless.
struct Chip {
    enum class Product { grd, slc };

    Product product = Product::grd;
    numerics::ComplexMatrix pixels;

    Eigen::Index rows() const { return pixels.rows(); }
    Eigen::Index cols() const { return pixels.cols(); }
};

std::string product_name(Chip::Product product);

enum class Confidence { high, medium, low };

/// One manifest row: a chip path relative to the dataset root plus its
/// labels. Empty label cells map to absent.
struct ChipRecord {
    std::string chip_path;
    std::optional<bool> is_vessel;
    std::optional<bool> is_fishing;
    Confidence confidence = Confidence::low;
};

enum class LabelField { is_vessel, is_fishing };

std::string label_field_name(LabelField field);
LabelField label_field_from_name(const std::string& name);

/// Parses a manifest CSV with header chip_path,is_vessel,is_fishing,confidence.
/// Boolean cells are lowercase true/false or empty; confidence is uppercase
/// HIGH/MEDIUM/LOW, exact match. Malformed rows report their line number.
std::vector<ChipRecord> read_manifest(const std::string& path);

void write_manifest(const std::string& path, const std::vector<ChipRecord>& records);

/// Chip binary format: magic "SARC", version u8 = 1, dtype u8 (0 = real u16,
/// 1 = complex i16 interleaved re/im), rows u16, cols u16, little-endian
/// row-major payload.
Chip read_chip(const std::string& path);
void write_chip(const std::string& path, const Chip& chip);

/// Keeps HIGH-confidence records, preserving order.
std::vector<ChipRecord> filter_high_confidence(const std::vector<ChipRecord>& records);

/// Draws per_class records per class value of the label field, uniformly
/// without replacement. Records whose label is absent are ignored. The
/// stream is keyed by (seed, "sample").
std::vector<ChipRecord> balanced_sample(const std::vector<ChipRecord>& records, LabelField field,
                                        std::size_t per_class, std::uint64_t seed);

/// Class-conditional synthetic chips for desk-scale verification: background
/// Gaussian texture plus a centered blob whose amplitude is class-dependent;
/// complex chips add a class-dependent phase ramp.
struct SynthClass {
    double background_mean = 200.0;
    double background_spread = 30.0;
    double blob_amplitude = 0.0;
    double phase_ramp = 0.0;  // radians per pixel step, complex chips only
};

struct SynthSpec {
    int rows = 16;
    int cols = 16;
    bool complex_pixels = false;
    std::size_t per_class = 10;
    std::uint64_t seed = 0;
    SynthClass negative;  // label false
    SynthClass positive;  // label true
};

void validate(const SynthSpec& spec);

struct SynthDataset {
    std::vector<Chip> chips;
    std::vector<int> labels;  // +/-1, aligned with chips
};

/// Deterministic in (spec, seed); the stream is keyed by (seed, "synth").
SynthDataset synth_generate(const SynthSpec& spec);

std::string synth_spec_to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const std::string& text);

}  // namespace qkmar::data
