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

#include <string>

#include "mkpqite/encoding.hpp"
#include "mkpqite/simulator.hpp"

namespace mkpqite {

enum class AnsatzKind { kIhva, kMaQaoa, kHea };

const char* ansatz_name(AnsatzKind kind);

struct AnsatzSpec {
  AnsatzKind kind;
  int reps = 1;
  ParamCircuit circuit;
  std::string provenance;
};

/// Orientation of iHVA rotations: the BFS parent carries the Z (for RZY)
/// and the child the Y.
struct IhvaOptions {
  /// Alternate RZY/RYZ on every spanning-forest pass instead of every rep.
  bool alternate_per_pass = false;
};

/// Imaginary-Hamiltonian variational ansatz over a Max-Cut graph: repeated
/// breadth-first spanning forests (smallest-index roots, ascending
/// neighbours), one rotation per forest edge, until every edge is used.
/// Odd reps use RZY, even reps RYZ. Starts from the uniform superposition.
AnsatzSpec build_ihva(const WeightedGraph& graph, int p = 1, IhvaOptions options = {});

/// Multi-angle QAOA: per layer one RZZ per coupling, one RZ per non-zero
/// field, one RX per qubit, each with its own angle.
AnsatzSpec build_maqaoa(const IsingHamiltonian& h, int p = 1);

/// Hardware-efficient ansatz: p blocks of (RY on every qubit, CX chain),
/// then a closing RY layer. (p + 1) * n parameters.
AnsatzSpec build_hea(int n_qubits, int p = 1);

}  // namespace mkpqite
