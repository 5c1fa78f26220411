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

#include "qkmar/kernels.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace qkmar::kernels {

namespace {

using nlohmann::json;

void check_same_length(const numerics::RealVector& x, const numerics::RealVector& x_prime) {
    if (x.size() != x_prime.size()) {
        throw_config("kernels", "kernel arguments must have equal length");
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw_config("kernels", "gamma must be finite and > 0");
    }
}

}  // namespace

std::string kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::linear:
            return "linear";
        case KernelFamily::rbf:
            return "rbf";
        case KernelFamily::laplacian:
            return "laplacian";
        case KernelFamily::quantum:
            return "quantum";
    }
    throw_config("kernels", "unknown kernel family");
}

KernelFamily kernel_family_from_name(const std::string& name) {
    if (name == "linear") return KernelFamily::linear;
    if (name == "rbf") return KernelFamily::rbf;
    if (name == "laplacian") return KernelFamily::laplacian;
    if (name == "quantum") return KernelFamily::quantum;
    throw_config("kernels", "unknown kernel family '" + name + "'");
}

KernelSpec KernelSpec::make_linear() { return KernelSpec{KernelFamily::linear, 0.0, {}}; }

KernelSpec KernelSpec::make_rbf(double gamma) {
    KernelSpec spec{KernelFamily::rbf, gamma, {}};
    validate(spec);
    return spec;
}

KernelSpec KernelSpec::make_laplacian(double gamma) {
    KernelSpec spec{KernelFamily::laplacian, gamma, {}};
    validate(spec);
    return spec;
}

KernelSpec KernelSpec::make_quantum(const qsim::EncodingSpec& encoding) {
    KernelSpec spec{KernelFamily::quantum, 0.0, encoding};
    validate(spec);
    return spec;
}

void validate(const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::linear:
            break;
        case KernelFamily::rbf:
        case KernelFamily::laplacian:
            check_gamma(spec.gamma);
            break;
        case KernelFamily::quantum:
            qsim::validate(spec.encoding);
            break;
    }
}

bool is_quantum(const KernelSpec& spec) { return spec.family == KernelFamily::quantum; }

std::string kernel_spec_to_json(const KernelSpec& spec) {
    json j;
    j["family"] = kernel_family_name(spec.family);
    if (spec.family == KernelFamily::rbf || spec.family == KernelFamily::laplacian) {
        j["gamma"] = spec.gamma;
    }
    if (spec.family == KernelFamily::quantum) {
        j["encoding"] = {{"family", qsim::family_name(spec.encoding.family)},
                         {"qubits", spec.encoding.qubits},
                         {"layers", spec.encoding.layers},
                         {"bandwidth", spec.encoding.bandwidth}};
    }
    return j.dump();
}

KernelSpec kernel_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw_config("kernels", std::string("invalid kernel spec JSON: ") + e.what());
    }
    try {
        KernelSpec spec;
        spec.family = kernel_family_from_name(j.at("family").get<std::string>());
        if (spec.family == KernelFamily::rbf || spec.family == KernelFamily::laplacian) {
            spec.gamma = j.at("gamma").get<double>();
        }
        if (spec.family == KernelFamily::quantum) {
            const json& enc = j.at("encoding");
            spec.encoding.family = qsim::family_from_name(enc.at("family").get<std::string>());
            spec.encoding.qubits = enc.at("qubits").get<int>();
            spec.encoding.layers = enc.at("layers").get<int>();
            spec.encoding.bandwidth = enc.at("bandwidth").get<double>();
        }
        validate(spec);
        return spec;
    } catch (const json::exception& e) {
        throw_config("kernels", std::string("invalid kernel spec JSON: ") + e.what());
    }
}

double linear(const numerics::RealVector& x, const numerics::RealVector& x_prime) {
    check_same_length(x, x_prime);
    return x.dot(x_prime);
}

double rbf(const numerics::RealVector& x, const numerics::RealVector& x_prime, double gamma) {
    check_same_length(x, x_prime);
    check_gamma(gamma);
    return std::exp(-gamma * (x - x_prime).squaredNorm());
}

double laplacian(const numerics::RealVector& x, const numerics::RealVector& x_prime,
                 double gamma) {
    check_same_length(x, x_prime);
    check_gamma(gamma);
    return std::exp(-gamma * (x - x_prime).cwiseAbs().sum());
}

numerics::ComplexVector bandwidth_scale(const numerics::ComplexVector& x, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw_config("kernels", "bandwidth must be finite and > 0");
    }
    return x * beta;
}

numerics::RealVector bandwidth_scale(const numerics::RealVector& x, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw_config("kernels", "bandwidth must be finite and > 0");
    }
    return x * beta;
}

namespace {

void check_domain(const KernelSpec& spec, const SampleSet& samples) {
    if (samples.is_complex && spec.family != KernelFamily::quantum) {
        throw_config("kernels",
                     kernel_family_name(spec.family) + " kernel requires real features");
    }
    if (spec.family == KernelFamily::quantum) {
        if (samples.is_complex && !qsim::family_is_complex(spec.encoding.family)) {
            throw_config("kernels", qsim::family_name(spec.encoding.family) +
                                        " encoding requires real features");
        }
        if (samples.dimension() != spec.encoding.qubits) {
            throw_config("kernels", "sample dimension " + std::to_string(samples.dimension()) +
                                        " does not match encoding qubit count " +
                                        std::to_string(spec.encoding.qubits));
        }
    }
}

double classical_value(const KernelSpec& spec, const numerics::RealVector& x,
                       const numerics::RealVector& y) {
    switch (spec.family) {
        case KernelFamily::linear:
            return linear(x, y);
        case KernelFamily::rbf:
            return rbf(x, y, spec.gamma);
        case KernelFamily::laplacian:
            return laplacian(x, y, spec.gamma);
        case KernelFamily::quantum:
            break;
    }
    throw_config("kernels", "classical_value called with a quantum spec");
}

std::vector<qsim::StateVector> encode_all(const qsim::EncodingSpec& encoding,
                                          const SampleSet& samples, int workers) {
    std::vector<qsim::StateVector> states(static_cast<std::size_t>(samples.count()),
                                          qsim::StateVector(encoding.qubits));
    parallel_for(static_cast<std::size_t>(samples.count()), workers, [&](std::size_t i) {
        states[i] =
            qsim::encode(encoding, numerics::ComplexVector(samples.features.row(i).transpose()));
    });
    return states;
}

}  // namespace

GramMatrix gram(const KernelSpec& spec, const SampleSet& samples,
                const std::vector<std::string>& sample_ids, int workers) {
    validate(spec);
    check_domain(spec, samples);
    const Eigen::Index m = samples.count();
    if (m == 0) {
        throw_config("kernels", "gram requires at least one sample");
    }

    GramMatrix result;
    result.kernel = spec;
    if (sample_ids.empty()) {
        result.sample_ids.reserve(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            result.sample_ids.push_back("s" + std::to_string(i));
        }
    } else {
        if (static_cast<Eigen::Index>(sample_ids.size()) != m) {
            throw_config("kernels", "sample_ids length does not match sample count");
        }
        result.sample_ids = sample_ids;
    }
    result.matrix.resize(m, m);

    if (is_quantum(spec)) {
        const auto states = encode_all(spec.encoding, samples, workers);
        parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t i) {
            for (std::size_t j = i; j < static_cast<std::size_t>(m); ++j) {
                const double value = qsim::state_fidelity(states[i], states[j]);
                result.matrix(i, j) = value;
                result.matrix(j, i) = value;
            }
        });
    } else {
        const numerics::RealMatrix x = samples.features.real();
        parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t i) {
            const numerics::RealVector xi = x.row(i).transpose();
            for (std::size_t j = i; j < static_cast<std::size_t>(m); ++j) {
                const double value = classical_value(spec, xi, x.row(j).transpose());
                result.matrix(i, j) = value;
                result.matrix(j, i) = value;
            }
        });
    }
    return result;
}

numerics::RealMatrix cross_gram(const KernelSpec& spec, const SampleSet& a, const SampleSet& b,
                                int workers) {
    validate(spec);
    check_domain(spec, a);
    check_domain(spec, b);
    if (a.dimension() != b.dimension()) {
        throw_config("kernels", "cross_gram sample sets must share one dimension");
    }
    const Eigen::Index n = a.count();
    const Eigen::Index m = b.count();
    numerics::RealMatrix out(n, m);

    if (is_quantum(spec)) {
        const auto states_a = encode_all(spec.encoding, a, workers);
        const auto states_b = encode_all(spec.encoding, b, workers);
        parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                out(i, j) = qsim::state_fidelity(states_a[i], states_b[j]);
            }
        });
    } else {
        const numerics::RealMatrix xa = a.features.real();
        const numerics::RealMatrix xb = b.features.real();
        parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
            const numerics::RealVector xi = xa.row(i).transpose();
            for (Eigen::Index j = 0; j < m; ++j) {
                out(i, j) = classical_value(spec, xi, xb.row(j).transpose());
            }
        });
    }
    return out;
}

namespace {

constexpr char kGramMagic[4] = {'Q', 'K', 'G', 'M'};
constexpr std::uint8_t kGramVersion = 1;

void write_u32(std::ostream& out, std::uint32_t value) {
    unsigned char bytes[4];
    for (int i = 0; i < 4; ++i) {
        bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
    }
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
        value |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    }
    return value;
}

void write_f64(std::ostream& out, double value) {
    std::uint64_t bits;
    std::memcpy(&bits, &value, 8);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    double value;
    std::memcpy(&value, &bits, 8);
    return value;
}

}  // namespace

void write_gram(const std::string& path, const GramMatrix& gram) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw_data("kernels", "cannot open '" + path + "' for writing");
    }
    out.write(kGramMagic, 4);
    out.put(static_cast<char>(kGramVersion));
    write_u32(out, static_cast<std::uint32_t>(gram.matrix.rows()));
    write_u32(out, static_cast<std::uint32_t>(gram.matrix.cols()));
    const std::string spec_json = kernel_spec_to_json(gram.kernel);
    write_u32(out, static_cast<std::uint32_t>(spec_json.size()));
    out.write(spec_json.data(), static_cast<std::streamsize>(spec_json.size()));
    for (Eigen::Index i = 0; i < gram.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < gram.matrix.cols(); ++j) {
            write_f64(out, gram.matrix(i, j));
        }
    }
    if (!out) {
        throw_data("kernels", "write failed for '" + path + "'");
    }
}

GramMatrix read_gram(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_data("kernels", "cannot open '" + path + "' for reading");
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kGramMagic, 4) != 0) {
        throw_data("kernels", "'" + path + "' is not a QKGM file (bad magic)");
    }
    const int version = in.get();
    if (version != kGramVersion) {
        throw_data("kernels", "unsupported QKGM version " + std::to_string(version));
    }
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    const std::uint32_t spec_len = read_u32(in);
    if (!in) {
        throw_data("kernels", "truncated QKGM header in '" + path + "'");
    }
    std::string spec_json(spec_len, '\0');
    in.read(spec_json.data(), spec_len);
    if (!in) {
        throw_data("kernels", "truncated kernel spec in '" + path + "'");
    }

    GramMatrix gram;
    gram.kernel = kernel_spec_from_json(spec_json);
    gram.matrix.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j) {
            gram.matrix(i, j) = read_f64(in);
        }
    }
    if (!in) {
        throw_data("kernels", "truncated QKGM payload in '" + path + "'");
    }
    gram.sample_ids.reserve(rows);
    for (std::uint32_t i = 0; i < rows; ++i) {
        gram.sample_ids.push_back("s" + std::to_string(i));
    }
    return gram;
}

}  // namespace qkmar::kernels
