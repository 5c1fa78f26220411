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

#include "qkmar/qsim.hpp"

#include <algorithm>
#include <cmath>

namespace qkmar::qsim {

namespace {

constexpr int kMaxQubits = 16;
constexpr int kOracleMaxQubits = 6;
constexpr double kClampSlack = 1e-10;

double safe_arg(Complex z) { return z == Complex(0.0, 0.0) ? 0.0 : std::arg(z); }

}  // namespace

StateVector::StateVector(int qubits) : qubits_(qubits) {
    if (qubits < 1 || qubits > kMaxQubits) {
        throw_config("qsim", "qubit count must be between 1 and " + std::to_string(kMaxQubits));
    }
    amplitudes_.assign(std::size_t{1} << qubits, Complex(0.0, 0.0));
    amplitudes_[0] = Complex(1.0, 0.0);
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const Complex& a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= qubits_) {
        throw_config("qsim", "qubit index " + std::to_string(q) + " out of range for " +
                                 std::to_string(qubits_) + " qubits");
    }
}

void StateVector::apply_ry(int q, double theta) {
    check_qubit(q);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::size_t step = stride(q);
    const std::size_t n = amplitudes_.size();
    for (std::size_t base = 0; base < n; base += 2 * step) {
        for (std::size_t offset = 0; offset < step; ++offset) {
            const std::size_t i0 = base + offset;
            const std::size_t i1 = i0 + step;
            const Complex a0 = amplitudes_[i0];
            const Complex a1 = amplitudes_[i1];
            amplitudes_[i0] = c * a0 - s * a1;
            amplitudes_[i1] = s * a0 + c * a1;
        }
    }
}

void StateVector::apply_rz(int q, double theta) {
    check_qubit(q);
    const Complex phase0 = std::polar(1.0, -theta / 2.0);
    const Complex phase1 = std::polar(1.0, theta / 2.0);
    const std::size_t step = stride(q);
    const std::size_t n = amplitudes_.size();
    for (std::size_t base = 0; base < n; base += 2 * step) {
        for (std::size_t offset = 0; offset < step; ++offset) {
            const std::size_t i0 = base + offset;
            const std::size_t i1 = i0 + step;
            amplitudes_[i0] *= phase0;
            amplitudes_[i1] *= phase1;
        }
    }
}

void StateVector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw_config("qsim", "CNOT control and target must differ");
    }
    const std::size_t cstep = stride(control);
    const std::size_t tstep = stride(target);
    const std::size_t n = amplitudes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Visit each swapped pair once: control bit set, target bit clear.
        if ((i & cstep) != 0 && (i & tstep) == 0) {
            std::swap(amplitudes_[i], amplitudes_[i | tstep]);
        }
    }
}

std::string family_name(CircuitFamily family) {
    switch (family) {
        case CircuitFamily::Ry1DSt:
            return "ry1dst";
        case CircuitFamily::RyRz1DAlt:
            return "ryrz1dalt";
        case CircuitFamily::CRyRz1DSt:
            return "cryrz1dst";
    }
    throw_config("qsim", "unknown circuit family");
}

CircuitFamily family_from_name(const std::string& name) {
    if (name == "ry1dst") return CircuitFamily::Ry1DSt;
    if (name == "ryrz1dalt") return CircuitFamily::RyRz1DAlt;
    if (name == "cryrz1dst") return CircuitFamily::CRyRz1DSt;
    throw_config("qsim", "unknown circuit family '" + name +
                             "' (expected ry1dst, ryrz1dalt, or cryrz1dst)");
}

bool family_is_complex(CircuitFamily family) { return family == CircuitFamily::CRyRz1DSt; }

void validate(const EncodingSpec& spec) {
    if (spec.qubits < 1 || spec.qubits > kMaxQubits) {
        throw_config("qsim", "encoding qubit count must be between 1 and " +
                                 std::to_string(kMaxQubits));
    }
    if (spec.layers < 1) {
        throw_config("qsim", "encoding layer count must be >= 1");
    }
    if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) {
        throw_config("qsim", "encoding bandwidth must be finite and > 0");
    }
}

namespace {

void append_staircase_cnots(std::vector<GateTemplate>& gates, int qubits) {
    for (int q = 0; q + 1 < qubits; ++q) {
        gates.push_back({GateKind::CNOT, q + 1, q, AngleRole::none, -1});
    }
}

void append_alternating_cnots(std::vector<GateTemplate>& gates, int qubits, int layer_index) {
    const int first_control = (layer_index % 2 == 0) ? 0 : 1;
    for (int c = first_control; c + 1 < qubits; c += 2) {
        gates.push_back({GateKind::CNOT, c + 1, c, AngleRole::none, -1});
    }
}

}  // namespace

std::vector<GateTemplate> layout(const EncodingSpec& spec) {
    validate(spec);
    std::vector<GateTemplate> gates;
    const int n = spec.qubits;
    for (int layer = 0; layer < spec.layers; ++layer) {
        switch (spec.family) {
            case CircuitFamily::Ry1DSt:
                for (int q = 0; q < n; ++q) {
                    gates.push_back({GateKind::RY, q, -1, AngleRole::scaled_value, q});
                }
                append_staircase_cnots(gates, n);
                break;
            case CircuitFamily::RyRz1DAlt:
                for (int q = 0; q < n; ++q) {
                    gates.push_back({GateKind::RY, q, -1, AngleRole::scaled_value, q});
                    gates.push_back({GateKind::RZ, q, -1, AngleRole::scaled_value, q});
                }
                append_alternating_cnots(gates, n, layer);
                break;
            case CircuitFamily::CRyRz1DSt:
                for (int q = 0; q < n; ++q) {
                    gates.push_back({GateKind::RY, q, -1, AngleRole::scaled_modulus, q});
                    gates.push_back({GateKind::RZ, q, -1, AngleRole::phase, q});
                }
                append_staircase_cnots(gates, n);
                break;
        }
    }
    return gates;
}

std::vector<GateEvent> instantiate(const EncodingSpec& spec, const numerics::ComplexVector& x) {
    if (x.size() != spec.qubits) {
        throw_config("qsim", "feature vector length " + std::to_string(x.size()) +
                                 " does not match qubit count " + std::to_string(spec.qubits));
    }
    if (!family_is_complex(spec.family)) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x(i).imag() != 0.0) {
                throw_config("qsim", family_name(spec.family) + " requires real features");
            }
        }
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x(i).real()) || !std::isfinite(x(i).imag())) {
            throw_config("qsim", "feature vector contains non-finite entries");
        }
    }

    std::vector<GateEvent> events;
    const std::vector<GateTemplate> templates = layout(spec);
    events.reserve(templates.size());
    for (const GateTemplate& t : templates) {
        GateEvent event{t.kind, t.target, t.control, 0.0};
        switch (t.role) {
            case AngleRole::none:
                break;
            case AngleRole::scaled_value:
                event.angle = spec.bandwidth * x(t.feature).real();
                break;
            case AngleRole::scaled_modulus:
                event.angle = spec.bandwidth * std::abs(x(t.feature));
                break;
            case AngleRole::phase:
                event.angle = safe_arg(x(t.feature));
                break;
        }
        events.push_back(event);
    }
    return events;
}

StateVector encode(const EncodingSpec& spec, const numerics::ComplexVector& x) {
    StateVector state(spec.qubits);
    for (const GateEvent& gate : instantiate(spec, x)) {
        switch (gate.kind) {
            case GateKind::RY:
                state.apply_ry(gate.target, gate.angle);
                break;
            case GateKind::RZ:
                state.apply_rz(gate.target, gate.angle);
                break;
            case GateKind::CNOT:
                state.apply_cnot(gate.control, gate.target);
                break;
        }
    }
    return state;
}

StateVector encode(const EncodingSpec& spec, const numerics::RealVector& x) {
    return encode(spec, numerics::ComplexVector(x.cast<Complex>()));
}

namespace {

numerics::ComplexMatrix single_qubit_matrix(GateKind kind, double angle) {
    numerics::ComplexMatrix g(2, 2);
    if (kind == GateKind::RY) {
        const double c = std::cos(angle / 2.0);
        const double s = std::sin(angle / 2.0);
        g << Complex(c, 0.0), Complex(-s, 0.0), Complex(s, 0.0), Complex(c, 0.0);
    } else {
        g << std::polar(1.0, -angle / 2.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
            std::polar(1.0, angle / 2.0);
    }
    return g;
}

numerics::ComplexMatrix kron(const numerics::ComplexMatrix& a, const numerics::ComplexMatrix& b) {
    numerics::ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

numerics::ComplexMatrix embed_single(int qubits, int q, const numerics::ComplexMatrix& g) {
    // Qubit 0 is the most significant bit, so it sits leftmost in the
    // Kronecker chain.
    const auto identity = [](Eigen::Index dim) {
        return numerics::ComplexMatrix(numerics::ComplexMatrix::Identity(dim, dim));
    };
    const Eigen::Index left_dim = Eigen::Index{1} << q;
    const Eigen::Index right_dim = Eigen::Index{1} << (qubits - 1 - q);
    return kron(kron(identity(left_dim), g), identity(right_dim));
}

numerics::ComplexMatrix dense_cnot(int qubits, int control, int target) {
    const std::size_t dim = std::size_t{1} << qubits;
    const std::size_t cbit = std::size_t{1} << (qubits - 1 - control);
    const std::size_t tbit = std::size_t{1} << (qubits - 1 - target);
    numerics::ComplexMatrix g = numerics::ComplexMatrix::Zero(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const std::size_t row = (col & cbit) != 0 ? (col ^ tbit) : col;
        g(row, col) = Complex(1.0, 0.0);
    }
    return g;
}

}  // namespace

numerics::ComplexMatrix unitary_of(const EncodingSpec& spec, const numerics::ComplexVector& x) {
    if (spec.qubits > kOracleMaxQubits) {
        throw_config("qsim", "unitary_of supports at most " + std::to_string(kOracleMaxQubits) +
                                 " qubits");
    }
    const std::size_t dim = std::size_t{1} << spec.qubits;
    numerics::ComplexMatrix u = numerics::ComplexMatrix::Identity(dim, dim);
    for (const GateEvent& gate : instantiate(spec, x)) {
        numerics::ComplexMatrix g;
        if (gate.kind == GateKind::CNOT) {
            g = dense_cnot(spec.qubits, gate.control, gate.target);
        } else {
            g = embed_single(spec.qubits, gate.target, single_qubit_matrix(gate.kind, gate.angle));
        }
        u = (g * u).eval();
    }
    return u;
}

double state_fidelity(const StateVector& a, const StateVector& b) {
    if (a.qubits() != b.qubits()) {
        throw_config("qsim", "fidelity requires states on the same qubit count");
    }
    Complex overlap(0.0, 0.0);
    const auto& av = a.amplitudes();
    const auto& bv = b.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i) {
        overlap += std::conj(bv[i]) * av[i];
    }
    double value = std::norm(overlap);
    if (value < 0.0 && value > -kClampSlack) {
        value = 0.0;
    }
    if (value > 1.0 && value < 1.0 + kClampSlack) {
        value = 1.0;
    }
    return value;
}

double kernel_value(const EncodingSpec& spec, const numerics::ComplexVector& x,
                    const numerics::ComplexVector& x_prime) {
    const StateVector psi = encode(spec, x);
    const StateVector psi_prime = encode(spec, x_prime);
    return state_fidelity(psi, psi_prime);
}

}  // namespace qkmar::qsim
