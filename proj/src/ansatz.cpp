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

#include "mkpqite/ansatz.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mkpqite {

namespace {

using Edge = std::pair<int, int>;

// One BFS spanning forest of the remaining edges, as (parent, child) pairs in
// discovery order.
std::vector<Edge> bfs_forest(int n_vertices, const std::set<Edge>& remaining) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_vertices));
  for (const auto& [u, v] : remaining) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<bool> visited(static_cast<std::size_t>(n_vertices), false);
  std::vector<Edge> forest;
  for (int root = 0; root < n_vertices; ++root) {
    if (visited[root]) continue;
    visited[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (visited[v]) continue;
        visited[v] = true;
        forest.emplace_back(u, v);
        queue.push_back(v);
      }
    }
  }
  return forest;
}

}  // namespace

const char* ansatz_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::kIhva: return "ihva";
    case AnsatzKind::kMaQaoa: return "ma-qaoa";
    case AnsatzKind::kHea: return "hea";
  }
  return "?";
}

AnsatzSpec build_ihva(const WeightedGraph& graph, int p, IhvaOptions options) {
  if (p < 1) throw std::invalid_argument("build_ihva: p must be >= 1");
  graph.validate();

  AnsatzSpec spec{AnsatzKind::kIhva, p, {}, "maxcut graph, " + std::to_string(graph.n_vertices) +
                                                " vertices, " + std::to_string(graph.edges.size()) + " edges"};
  ParamCircuit& c = spec.circuit;
  c.n_qubits = graph.n_vertices;
  c.initial_state = InitialState::kUniform;

  int pass = 0;
  for (int rep = 1; rep <= p; ++rep) {
    std::set<Edge> remaining;
    for (const auto& e : graph.edges) remaining.emplace(e.u, e.v);
    while (!remaining.empty()) {
      const auto forest = bfs_forest(graph.n_vertices, remaining);
      ++pass;
      const bool zy = options.alternate_per_pass ? (pass % 2 == 1) : (rep % 2 == 1);
      for (const auto& [parent, child] : forest) {
        c.gates.push_back({zy ? GateKind::kRZY : GateKind::kRYZ, {parent, child}, c.n_params++});
        remaining.erase({std::min(parent, child), std::max(parent, child)});
      }
    }
  }
  return spec;
}

AnsatzSpec build_maqaoa(const IsingHamiltonian& h, int p) {
  if (p < 1) throw std::invalid_argument("build_maqaoa: p must be >= 1");
  AnsatzSpec spec{AnsatzKind::kMaQaoa, p, {}, "ising hamiltonian, " + std::to_string(h.n_qubits) + " qubits"};
  ParamCircuit& c = spec.circuit;
  c.n_qubits = h.n_qubits;
  c.initial_state = InitialState::kUniform;
  for (int layer = 0; layer < p; ++layer) {
    for (const auto& [kl, j] : h.couplings)
      if (j != 0.0) c.gates.push_back({GateKind::kRZZ, {kl.first, kl.second}, c.n_params++});
    for (int k = 0; k < h.n_qubits; ++k)
      if (h.fields[k] != 0.0) c.gates.push_back({GateKind::kRZ, {k, -1}, c.n_params++});
    for (int k = 0; k < h.n_qubits; ++k) c.gates.push_back({GateKind::kRX, {k, -1}, c.n_params++});
  }
  return spec;
}

AnsatzSpec build_hea(int n_qubits, int p) {
  if (p < 1) throw std::invalid_argument("build_hea: p must be >= 1");
  if (n_qubits < 1) throw std::invalid_argument("build_hea: n_qubits must be >= 1");
  AnsatzSpec spec{AnsatzKind::kHea, p, {}, std::to_string(n_qubits) + " qubits"};
  ParamCircuit& c = spec.circuit;
  c.n_qubits = n_qubits;
  c.initial_state = InitialState::kAllZero;
  for (int rep = 0; rep < p; ++rep) {
    for (int k = 0; k < n_qubits; ++k) c.gates.push_back({GateKind::kRY, {k, -1}, c.n_params++});
    for (int k = 0; k + 1 < n_qubits; ++k) c.gates.push_back({GateKind::kCX, {k, k + 1}, std::nullopt});
  }
  for (int k = 0; k < n_qubits; ++k) c.gates.push_back({GateKind::kRY, {k, -1}, c.n_params++});
  return spec;
}

}  // namespace mkpqite
