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

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mkpqite/common.hpp"
#include "mkpqite/instances.hpp"

namespace mkpqite {

using VarPair = std::pair<int, int>;

/// Quadratic pseudo-boolean objective
///   f(x) = offset + sum_k linear[k] x_k + sum_{k<l} quadratic[{k,l}] x_k x_l.
struct Qubo {
  int n_vars = 0;
  std::map<VarPair, double> quadratic;  // keys satisfy k < l
  std::vector<double> linear;
  double offset = 0.0;

  explicit Qubo(int n = 0) : n_vars(n), linear(static_cast<size_t>(n), 0.0) {}

  void add_linear(int k, double c) { linear[static_cast<size_t>(k)] += c; }
  /// Adds c * x_k * x_l; k == l folds into the linear term (x^2 = x).
  void add_quadratic(int k, int l, double c);

  double evaluate(const BitString& x) const;
  /// Value at the assignment encoded in the low n_vars bits of `index`.
  double evaluate_index(std::uint64_t index) const;
  void validate() const;
};

struct PenaltyConfig {
  double lambda1 = 10.0;
  double lambda2 = 10.0;
};

using SpinAssignment = std::vector<int>;

/// Diagonal Hamiltonian offset + sum_k h_k Z_k + sum_{k<l} J_kl Z_k Z_l.
/// Basis index bit k = 0 means z_k = +1. `scale` is the factor d by which
/// the coefficients have been divided (1 for an unscaled Hamiltonian).
struct IsingHamiltonian {
  int n_qubits = 0;
  std::vector<double> fields;
  std::map<VarPair, double> couplings;
  double offset = 0.0;
  double scale = 1.0;

  explicit IsingHamiltonian(int n = 0) : n_qubits(n), fields(static_cast<size_t>(n), 0.0) {}

  double energy(std::uint64_t basis_index) const;
  double energy(const SpinAssignment& z) const;
  /// All 2^n basis-state energies, indexed by basis index.
  std::vector<double> diagonal() const;
  /// Number of non-zero field terms.
  int n_fields() const;
};

struct WeightedEdge {
  int u;
  int v;
  double weight;

  bool operator==(const WeightedEdge&) const = default;
};

struct WeightedGraph {
  int n_vertices = 0;
  std::vector<WeightedEdge> edges;  // u < v, sorted by (u, v)

  void validate() const;
  double cut_value(const SpinAssignment& s) const;
};

/// Unbalanced-penalty QUBO of an MKP instance:
///   -sum v_j x_ij - l1 [sum h1_i + sum h2_j] + l2 [sum h1_i^2 + sum h2_j^2]
/// with h1_i = W_i - sum_j w_j x_ij and h2_j = 1 - sum_i x_ij.
/// Variable k = i * n + j.
Qubo build_unbalanced_qubo(const MkpInstance& instance, const PenaltyConfig& penalties = {});

/// Substitutes x_k = (1 - z_k) / 2.
IsingHamiltonian qubo_to_ising(const Qubo& q);

/// Sign applied to the auxiliary-vertex edges (0, k) relative to the
/// row-sum weights. With it, QUBO(x) = b - cut(s) / 2 for x_k = [s_0 != s_k].
inline constexpr double kAuxEdgeSign = -1.0;

/// QUBO -> Max-Cut reduction on n + 1 vertices (vertex 0 auxiliary).
WeightedGraph qubo_to_maxcut(const Qubo& q);

/// x_k = 1 iff s_0 != s_k. Spins are indexed by graph vertex.
BitString decode_maxcut_solution(const WeightedGraph& graph, const SpinAssignment& spins);

/// Spin of each qubit for a measured basis bit-string (bit 0 -> +1).
SpinAssignment spins_from_bits(const BitString& bits);

/// H = sum w_uv (Z_u Z_v - 1) / 2; basis energy equals -cut.
IsingHamiltonian maxcut_hamiltonian(const WeightedGraph& graph);

/// Largest qubit count accepted by spectral_norm's enumeration.
inline constexpr int kSpectralGuard = 24;

/// max over basis states of |energy|.
double spectral_norm(const IsingHamiltonian& h);

/// Divides every coefficient by d and multiplies the recorded scale by d.
IsingHamiltonian rescale(const IsingHamiltonian& h, double d);

}  // namespace mkpqite
