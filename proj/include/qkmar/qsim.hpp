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

#include <complex>
#include <string>
#include <vector>

#include "qkmar/numerics.hpp"

namespace qkmar::qsim {

using Complex = std::complex<double>;

/// Noiseless n-qubit pure state. Amplitude index i encodes the computational
/// basis state with qubit 0 as the most significant bit.
class StateVector {
  public:
    explicit StateVector(int qubits);

    int qubits() const noexcept { return qubits_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
    Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }

    double norm_squared() const;

    /// R_Y(theta) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]] on qubit q.
    void apply_ry(int q, double theta);

    /// R_Z(theta) = diag(e^{-i t/2}, e^{+i t/2}) on qubit q.
    void apply_rz(int q, double theta);

    /// Flips the target bit on basis states whose control bit is 1.
    void apply_cnot(int control, int target);

  private:
    // Index stride of qubit q under the MSB-first convention.
    std::size_t stride(int q) const { return std::size_t{1} << (qubits_ - 1 - q); }
    void check_qubit(int q) const;

    int qubits_;
    std::vector<Complex> amplitudes_;
};

/// Data-encoding circuit families.
enum class CircuitFamily { Ry1DSt, RyRz1DAlt, CRyRz1DSt };

std::string family_name(CircuitFamily family);
CircuitFamily family_from_name(const std::string& name);

/// Does the family encode complex features? Ry1DSt and RyRz1DAlt take real
/// features only; CRyRz1DSt takes complex features.
bool family_is_complex(CircuitFamily family);

/// Fully specifies a data-encoding unitary U(x): family, one qubit per
/// feature, layer count L >= 1, and the bandwidth beta > 0 that rescales the
/// features before encoding.
struct EncodingSpec {
    CircuitFamily family = CircuitFamily::Ry1DSt;
    int qubits = 1;
    int layers = 1;
    double bandwidth = 1.0;
};

void validate(const EncodingSpec& spec);

enum class GateKind { RY, RZ, CNOT };

/// How a rotation angle is derived from the feature assigned to a gate.
///   scaled_value:   bandwidth * x_i        (real families)
///   scaled_modulus: bandwidth * |z_i|      (CRyRz1DSt R_Y)
///   phase:          arg(z_i), no bandwidth (CRyRz1DSt R_Z)
enum class AngleRole { none, scaled_value, scaled_modulus, phase };

/// One gate slot of the circuit with the angle still symbolic: the feature
/// index and its role are recorded instead of a concrete angle.
struct GateTemplate {
    GateKind kind = GateKind::RY;
    int target = 0;
    int control = -1;
    AngleRole role = AngleRole::none;
    int feature = -1;
};

/// A gate with its angle instantiated for a concrete feature vector.
struct GateEvent {
    GateKind kind = GateKind::RY;
    int target = 0;
    int control = -1;
    double angle = 0.0;
};

/// Per-layer gate sequence of the family, repeated `layers` times. Within a
/// layer all rotations precede all entangling gates; rotation sublayers are
/// emitted per qubit in wire order (R_Y then R_Z on the same qubit where the
/// family uses both).
std::vector<GateTemplate> layout(const EncodingSpec& spec);

/// Instantiates the layout's angles for a concrete feature vector. Real
/// families reject inputs with nonzero imaginary parts; arg(0) is taken as 0.
std::vector<GateEvent> instantiate(const EncodingSpec& spec, const numerics::ComplexVector& x);

/// U(x)|0>: encodes a feature vector as a quantum state by in-place pairwise
/// amplitude updates, O(2^n) per gate.
StateVector encode(const EncodingSpec& spec, const numerics::ComplexVector& x);
StateVector encode(const EncodingSpec& spec, const numerics::RealVector& x);

/// Dense 2^n x 2^n matrix of U(x), built by explicit Kronecker embeddings and
/// dense matrix products. Intentionally limited to n <= 6: this is the
/// independent cross-check for `encode`, not a production path.
numerics::ComplexMatrix unitary_of(const EncodingSpec& spec, const numerics::ComplexVector& x);

/// Fidelity kernel |<0|U^dag(x')U(x)|0>|^2, evaluated as the squared inner
/// product of the two encoded statevectors. Clamped into [0, 1] when within
/// 1e-10 outside.
double kernel_value(const EncodingSpec& spec, const numerics::ComplexVector& x,
                    const numerics::ComplexVector& x_prime);

/// Squared overlap of two cached encoded states.
double state_fidelity(const StateVector& a, const StateVector& b);

}  // namespace qkmar::qsim
