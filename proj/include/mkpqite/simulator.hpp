// Copyright 2026 The mkpqite Authors
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

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mkpqite/common.hpp"
#include "mkpqite/encoding.hpp"

namespace mkpqite {

using Complex = std::complex<double>;

enum class GateKind { kH, kX, kSqrtX, kCX, kRX, kRY, kRZ, kRZZ, kRZY, kRYZ };

const char* gate_name(GateKind kind);
int gate_arity(GateKind kind);
bool is_parameterized(GateKind kind);
/// True when the gate (and its generator factor -iG/2) maps real amplitude
/// vectors to real vectors.
bool is_real_gate(GateKind kind);

/// A gate on one or two qubits. Rotations are U(theta) = exp(-i theta G / 2)
/// with G the Pauli string named by the kind, first letter on targets[0]:
/// RZY is exp(-i theta Z_a Y_b / 2), RYZ is exp(-i theta Y_a Z_b / 2).
/// For CX, targets[0] is the control.
struct GateSpec {
  GateKind kind;
  std::array<int, 2> targets{-1, -1};
  std::optional<int> param_slot;

  bool operator==(const GateSpec&) const = default;
};

enum class InitialState { kAllZero, kUniform };

struct ParamCircuit {
  int n_qubits = 0;
  std::vector<GateSpec> gates;
  int n_params = 0;
  InitialState initial_state = InitialState::kAllZero;

  /// Throws std::invalid_argument on bad targets, arity or slot usage.
  void validate() const;
  /// True when every gate is real, so the whole evolution stays real.
  bool is_real() const;
  /// One line per gate: `kind targets slot`.
  std::string dump() const;
};

/// Amplitudes over 2^n basis states; qubit k is bit k of the basis index.
struct StateVector {
  int n_qubits = 0;
  std::vector<Complex> amplitudes;

  static StateVector initial(int n_qubits, InitialState init);
  double norm() const;
};

/// Dense 2x2 or 4x4 matrix of a gate in its local basis; local index bit 0 is
/// targets[0], bit 1 is targets[1].
Eigen::MatrixXcd gate_matrix(GateKind kind, double theta = 0.0);

/// Applies one gate in place. `theta` is ignored for fixed gates.
void apply_gate(std::span<Complex> amps, const GateSpec& gate, double theta);
void apply_gate(std::span<double> amps, const GateSpec& gate, double theta);
/// Applies U(theta)^dagger in place.
void apply_gate_adjoint(std::span<Complex> amps, const GateSpec& gate, double theta);
void apply_gate_adjoint(std::span<double> amps, const GateSpec& gate, double theta);
/// Multiplies by the generator factor -i G / 2 of a parameterized gate.
void apply_generator(std::span<Complex> amps, const GateSpec& gate);
void apply_generator(std::span<double> amps, const GateSpec& gate);

StateVector run(const ParamCircuit& circuit, std::span<const double> theta);

/// sum_z |amp_z|^2 energy(z).
double expectation(const StateVector& state, const IsingHamiltonian& h);
/// Same, against a precomputed diagonal.
double expectation(const StateVector& state, std::span<const double> diagonal);

/// d|psi>/d theta_k for every parameter k, as unnormalized vectors.
std::vector<std::vector<Complex>> derivative_states(const ParamCircuit& circuit,
                                                    std::span<const double> theta);

/// Basis state of maximum probability (smallest index on ties), as bits
/// indexed by qubit.
BitString argmax_bitstring(const StateVector& state);

/// Seeded multinomial sampling; keys are bit-strings rendered qubit 0 first.
std::map<std::string, std::int64_t> sample(const StateVector& state, std::int64_t shots,
                                           std::uint64_t seed);

}  // namespace mkpqite
