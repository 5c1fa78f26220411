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

#include "qkmar/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qkmar::data {

namespace {

using nlohmann::json;

constexpr char kChipMagic[4] = {'S', 'A', 'R', 'C'};
constexpr std::uint8_t kChipVersion = 1;
constexpr std::uint8_t kDtypeRealU16 = 0;
constexpr std::uint8_t kDtypeComplexI16 = 1;

std::uint16_t read_u16(std::istream& in) {
    unsigned char bytes[2];
    in.read(reinterpret_cast<char*>(bytes), 2);
    return static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
}

void write_u16(std::ostream& out, std::uint16_t value) {
    const unsigned char bytes[2] = {static_cast<unsigned char>(value & 0xff),
                                    static_cast<unsigned char>((value >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 2);
}

std::int16_t read_i16(std::istream& in) {
    return static_cast<std::int16_t>(read_u16(in));
}

void write_i16(std::ostream& out, std::int16_t value) {
    write_u16(out, static_cast<std::uint16_t>(value));
}

}  // namespace

std::string product_name(Chip::Product product) {
    return product == Chip::Product::grd ? "GRD" : "SLC";
}

std::string label_field_name(LabelField field) {
    return field == LabelField::is_vessel ? "is_vessel" : "is_fishing";
}

LabelField label_field_from_name(const std::string& name) {
    if (name == "is_vessel") return LabelField::is_vessel;
    if (name == "is_fishing") return LabelField::is_fishing;
    throw_config("data", "unknown label field '" + name + "'");
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::optional<bool> parse_bool_cell(const std::string& cell, std::size_t row) {
    if (cell.empty()) {
        return std::nullopt;
    }
    if (cell == "true") {
        return true;
    }
    if (cell == "false") {
        return false;
    }
    throw_data("data", "manifest row " + std::to_string(row) + ": boolean cell '" + cell +
                           "' must be lowercase true/false or empty");
}

Confidence parse_confidence(const std::string& cell, std::size_t row) {
    if (cell == "HIGH") return Confidence::high;
    if (cell == "MEDIUM") return Confidence::medium;
    if (cell == "LOW") return Confidence::low;
    throw_data("data", "manifest row " + std::to_string(row) + ": unknown confidence '" + cell +
                           "' (expected HIGH, MEDIUM, or LOW)");
}

std::string confidence_name(Confidence confidence) {
    switch (confidence) {
        case Confidence::high:
            return "HIGH";
        case Confidence::medium:
            return "MEDIUM";
        case Confidence::low:
            return "LOW";
    }
    throw_data("data", "unknown confidence value");
}

std::string bool_cell(const std::optional<bool>& value) {
    if (!value.has_value()) {
        return "";
    }
    return *value ? "true" : "false";
}

}  // namespace

std::vector<ChipRecord> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw_data("data", "cannot open manifest '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw_data("data", "manifest '" + path + "' is empty");
    }
    if (line == "chip_path,is_vessel,is_fishing,confidence\r") {
        line.pop_back();
    }
    if (line != "chip_path,is_vessel,is_fishing,confidence") {
        throw_data("data", "manifest '" + path + "' has an unexpected header");
    }

    std::vector<ChipRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_csv_row(line);
        if (cells.size() != 4) {
            throw_data("data", "manifest row " + std::to_string(row) + ": expected 4 cells, got " +
                                   std::to_string(cells.size()));
        }
        if (cells[0].empty()) {
            throw_data("data", "manifest row " + std::to_string(row) + ": empty chip_path");
        }
        ChipRecord record;
        record.chip_path = cells[0];
        record.is_vessel = parse_bool_cell(cells[1], row);
        record.is_fishing = parse_bool_cell(cells[2], row);
        record.confidence = parse_confidence(cells[3], row);
        records.push_back(std::move(record));
    }
    return records;
}

void write_manifest(const std::string& path, const std::vector<ChipRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw_data("data", "cannot open manifest '" + path + "' for writing");
    }
    out << "chip_path,is_vessel,is_fishing,confidence\n";
    for (const ChipRecord& record : records) {
        out << record.chip_path << "," << bool_cell(record.is_vessel) << ","
            << bool_cell(record.is_fishing) << "," << confidence_name(record.confidence) << "\n";
    }
    if (!out) {
        throw_data("data", "write failed for manifest '" + path + "'");
    }
}

Chip read_chip(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_data("data", "cannot open chip '" + path + "'");
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kChipMagic, 4) != 0) {
        throw_data("data", "'" + path + "' is not a SARC chip (bad magic)");
    }
    const int version = in.get();
    if (version != kChipVersion) {
        throw_data("data", "'" + path + "': unsupported SARC version " + std::to_string(version));
    }
    const int dtype = in.get();
    if (dtype != kDtypeRealU16 && dtype != kDtypeComplexI16) {
        throw_data("data", "'" + path + "': unknown SARC dtype " + std::to_string(dtype));
    }
    const std::uint16_t rows = read_u16(in);
    const std::uint16_t cols = read_u16(in);
    if (!in || rows == 0 || cols == 0) {
        throw_data("data", "'" + path + "': invalid SARC shape");
    }

    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    const std::size_t value_bytes = dtype == kDtypeRealU16 ? 2 : 4;
    const auto header_end = in.tellg();
    in.seekg(0, std::ios::end);
    const auto available = static_cast<std::size_t>(in.tellg() - header_end);
    in.seekg(header_end);
    const std::size_t expected = count * value_bytes;
    if (available != expected) {
        throw_data("data", "'" + path + "': expected " + std::to_string(expected) +
                               " payload bytes, found " + std::to_string(available));
    }

    Chip chip;
    chip.product = dtype == kDtypeRealU16 ? Chip::Product::grd : Chip::Product::slc;
    chip.pixels.resize(rows, cols);
    for (std::uint16_t r = 0; r < rows; ++r) {
        for (std::uint16_t c = 0; c < cols; ++c) {
            if (dtype == kDtypeRealU16) {
                chip.pixels(r, c) = {static_cast<double>(read_u16(in)), 0.0};
            } else {
                const double re = read_i16(in);
                const double im = read_i16(in);
                chip.pixels(r, c) = {re, im};
            }
        }
    }
    if (!in) {
        throw_data("data", "'" + path + "': truncated SARC payload");
    }
    return chip;
}

namespace {

std::uint16_t to_u16_pixel(double value, const std::string& path) {
    if (!(value >= 0.0 && value <= 65535.0) || value != std::floor(value)) {
        throw_data("data", "'" + path + "': GRD pixel " + std::to_string(value) +
                               " is not an integer in [0, 65535]");
    }
    return static_cast<std::uint16_t>(value);
}

std::int16_t to_i16_pixel(double value, const std::string& path) {
    if (!(value >= -32768.0 && value <= 32767.0) || value != std::floor(value)) {
        throw_data("data", "'" + path + "': SLC pixel component " + std::to_string(value) +
                               " is not an integer in [-32768, 32767]");
    }
    return static_cast<std::int16_t>(value);
}

}  // namespace

void write_chip(const std::string& path, const Chip& chip) {
    if (chip.pixels.size() == 0) {
        throw_data("data", "cannot write an empty chip");
    }
    if (chip.rows() > 65535 || chip.cols() > 65535) {
        throw_data("data", "chip shape exceeds the SARC u16 limits");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw_data("data", "cannot open chip '" + path + "' for writing");
    }
    out.write(kChipMagic, 4);
    out.put(static_cast<char>(kChipVersion));
    out.put(static_cast<char>(chip.product == Chip::Product::grd ? kDtypeRealU16
                                                                 : kDtypeComplexI16));
    write_u16(out, static_cast<std::uint16_t>(chip.rows()));
    write_u16(out, static_cast<std::uint16_t>(chip.cols()));
    for (Eigen::Index r = 0; r < chip.rows(); ++r) {
        for (Eigen::Index c = 0; c < chip.cols(); ++c) {
            const std::complex<double> pixel = chip.pixels(r, c);
            if (chip.product == Chip::Product::grd) {
                if (pixel.imag() != 0.0) {
                    throw_data("data", "'" + path + "': GRD pixels must be real");
                }
                write_u16(out, to_u16_pixel(pixel.real(), path));
            } else {
                write_i16(out, to_i16_pixel(pixel.real(), path));
                write_i16(out, to_i16_pixel(pixel.imag(), path));
            }
        }
    }
    if (!out) {
        throw_data("data", "write failed for chip '" + path + "'");
    }
}

std::vector<ChipRecord> filter_high_confidence(const std::vector<ChipRecord>& records) {
    std::vector<ChipRecord> out;
    for (const ChipRecord& record : records) {
        if (record.confidence == Confidence::high) {
            out.push_back(record);
        }
    }
    return out;
}

std::vector<ChipRecord> balanced_sample(const std::vector<ChipRecord>& records, LabelField field,
                                        std::size_t per_class, std::uint64_t seed) {
    if (per_class == 0) {
        throw_config("data", "balanced_sample requires per_class >= 1");
    }
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::optional<bool>& label = field == LabelField::is_vessel
                                               ? records[i].is_vessel
                                               : records[i].is_fishing;
        if (!label.has_value()) {
            continue;
        }
        (*label ? positives : negatives).push_back(i);
    }
    if (positives.size() < per_class || negatives.size() < per_class) {
        throw_data("data", "insufficient " + label_field_name(field) +
                               " populations for per_class=" + std::to_string(per_class) +
                               ": true=" + std::to_string(positives.size()) +
                               ", false=" + std::to_string(negatives.size()));
    }

    RandomStream stream(seed, "sample");
    stream.shuffle(negatives);
    stream.shuffle(positives);
    std::vector<std::size_t> chosen(negatives.begin(),
                                    negatives.begin() + static_cast<std::ptrdiff_t>(per_class));
    chosen.insert(chosen.end(), positives.begin(),
                  positives.begin() + static_cast<std::ptrdiff_t>(per_class));
    std::sort(chosen.begin(), chosen.end());

    std::vector<ChipRecord> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) {
        out.push_back(records[i]);
    }
    return out;
}

void validate(const SynthSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1) {
        throw_config("data", "synthetic chip shape must be positive");
    }
    if (spec.per_class == 0) {
        throw_config("data", "synthetic spec requires per_class >= 1");
    }
    if (!(spec.negative.background_spread > 0.0) || !(spec.positive.background_spread > 0.0)) {
        throw_config("data", "synthetic background spread must be > 0");
    }
}

namespace {

Chip synth_chip(const SynthSpec& spec, const SynthClass& klass, RandomStream& stream) {
    Chip chip;
    chip.product = spec.complex_pixels ? Chip::Product::slc : Chip::Product::grd;
    chip.pixels.resize(spec.rows, spec.cols);
    const double r0 = (spec.rows - 1) / 2.0;
    const double c0 = (spec.cols - 1) / 2.0;
    const double sigma = std::max(1.0, std::min(spec.rows, spec.cols) / 6.0);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            const double dist2 = (r - r0) * (r - r0) + (c - c0) * (c - c0);
            const double blob = klass.blob_amplitude * std::exp(-dist2 / (2.0 * sigma * sigma));
            double magnitude =
                klass.background_mean + klass.background_spread * stream.next_gaussian() + blob;
            if (spec.complex_pixels) {
                const double phase = klass.phase_ramp * (r + c);
                magnitude = std::min(magnitude, 32000.0);
                double re = std::round(magnitude * std::cos(phase));
                double im = std::round(magnitude * std::sin(phase));
                re = std::clamp(re, -32768.0, 32767.0);
                im = std::clamp(im, -32768.0, 32767.0);
                chip.pixels(r, c) = {re, im};
            } else {
                chip.pixels(r, c) = {std::clamp(std::round(magnitude), 0.0, 65535.0), 0.0};
            }
        }
    }
    return chip;
}

}  // namespace

SynthDataset synth_generate(const SynthSpec& spec) {
    validate(spec);
    RandomStream stream(spec.seed, "synth");
    SynthDataset dataset;
    dataset.chips.reserve(2 * spec.per_class);
    dataset.labels.reserve(2 * spec.per_class);
    // Interleave classes so the manifest order carries no class signal.
    for (std::size_t i = 0; i < spec.per_class; ++i) {
        dataset.chips.push_back(synth_chip(spec, spec.negative, stream));
        dataset.labels.push_back(-1);
        dataset.chips.push_back(synth_chip(spec, spec.positive, stream));
        dataset.labels.push_back(1);
    }
    return dataset;
}

namespace {

json synth_class_to_json(const SynthClass& klass) {
    return json{{"background_mean", klass.background_mean},
                {"background_spread", klass.background_spread},
                {"blob_amplitude", klass.blob_amplitude},
                {"phase_ramp", klass.phase_ramp}};
}

SynthClass synth_class_from_json(const json& j) {
    SynthClass klass;
    klass.background_mean = j.value("background_mean", klass.background_mean);
    klass.background_spread = j.value("background_spread", klass.background_spread);
    klass.blob_amplitude = j.value("blob_amplitude", klass.blob_amplitude);
    klass.phase_ramp = j.value("phase_ramp", klass.phase_ramp);
    return klass;
}

}  // namespace

std::string synth_spec_to_json(const SynthSpec& spec) {
    json j;
    j["rows"] = spec.rows;
    j["cols"] = spec.cols;
    j["complex_pixels"] = spec.complex_pixels;
    j["per_class"] = spec.per_class;
    j["seed"] = spec.seed;
    j["negative"] = synth_class_to_json(spec.negative);
    j["positive"] = synth_class_to_json(spec.positive);
    return j.dump(2);
}

SynthSpec synth_spec_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        SynthSpec spec;
        spec.rows = j.value("rows", spec.rows);
        spec.cols = j.value("cols", spec.cols);
        spec.complex_pixels = j.value("complex_pixels", spec.complex_pixels);
        spec.per_class = j.at("per_class").get<std::size_t>();
        spec.seed = j.value("seed", spec.seed);
        if (j.contains("negative")) {
            spec.negative = synth_class_from_json(j.at("negative"));
        }
        if (j.contains("positive")) {
            spec.positive = synth_class_from_json(j.at("positive"));
        }
        validate(spec);
        return spec;
    } catch (const json::exception& e) {
        throw_config("data", std::string("invalid synthetic spec JSON: ") + e.what());
    }
}

}  // namespace qkmar::data
