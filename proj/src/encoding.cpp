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

#include "mkpqite/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mkpqite {

namespace {

inline int spin_of(std::uint64_t index, int k) { return ((index >> k) & 1U) ? -1 : 1; }

// Adds -l1 * h + l2 * h^2 for h = c - sum_t a_t x_{k_t}.
void add_unbalanced_penalty(Qubo& q, double c, const std::vector<std::pair<int, double>>& terms,
                            const PenaltyConfig& p) {
  q.offset += -p.lambda1 * c + p.lambda2 * c * c;
  for (const auto& [k, a] : terms) {
    q.add_linear(k, p.lambda1 * a - 2.0 * p.lambda2 * c * a);
    q.add_linear(k, p.lambda2 * a * a);
  }
  for (size_t s = 0; s < terms.size(); ++s)
    for (size_t t = s + 1; t < terms.size(); ++t)
      q.add_quadratic(terms[s].first, terms[t].first, 2.0 * p.lambda2 * terms[s].second * terms[t].second);
}

}  // namespace

void Qubo::add_quadratic(int k, int l, double c) {
  if (k == l) {
    add_linear(k, c);
    return;
  }
  if (k > l) std::swap(k, l);
  quadratic[{k, l}] += c;
}

double Qubo::evaluate(const BitString& x) const {
  if (x.size() != static_cast<size_t>(n_vars))
    throw std::invalid_argument("Qubo::evaluate: bit-string length mismatch");
  double v = offset;
  for (int k = 0; k < n_vars; ++k)
    if (x[k]) v += linear[k];
  for (const auto& [kl, c] : quadratic)
    if (x[kl.first] && x[kl.second]) v += c;
  return v;
}

double Qubo::evaluate_index(std::uint64_t index) const {
  double v = offset;
  for (int k = 0; k < n_vars; ++k)
    if ((index >> k) & 1U) v += linear[k];
  for (const auto& [kl, c] : quadratic)
    if (((index >> kl.first) & 1U) && ((index >> kl.second) & 1U)) v += c;
  return v;
}

void Qubo::validate() const {
  if (linear.size() != static_cast<size_t>(n_vars)) throw std::invalid_argument("Qubo: linear size mismatch");
  if (!std::isfinite(offset)) throw std::invalid_argument("Qubo: non-finite offset");
  for (double l : linear)
    if (!std::isfinite(l)) throw std::invalid_argument("Qubo: non-finite linear coefficient");
  for (const auto& [kl, c] : quadratic) {
    if (kl.first >= kl.second || kl.first < 0 || kl.second >= n_vars)
      throw std::invalid_argument("Qubo: quadratic key out of order or range");
    if (!std::isfinite(c)) throw std::invalid_argument("Qubo: non-finite quadratic coefficient");
  }
}

double IsingHamiltonian::energy(std::uint64_t index) const {
  double e = offset;
  for (int k = 0; k < n_qubits; ++k) e += fields[k] * spin_of(index, k);
  for (const auto& [kl, j] : couplings) e += j * spin_of(index, kl.first) * spin_of(index, kl.second);
  return e;
}

double IsingHamiltonian::energy(const SpinAssignment& z) const {
  if (z.size() != static_cast<size_t>(n_qubits))
    throw std::invalid_argument("IsingHamiltonian::energy: spin count mismatch");
  double e = offset;
  for (int k = 0; k < n_qubits; ++k) e += fields[k] * z[k];
  for (const auto& [kl, j] : couplings) e += j * z[kl.first] * z[kl.second];
  return e;
}

std::vector<double> IsingHamiltonian::diagonal() const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  std::vector<double> diag(dim, offset);
  for (int k = 0; k < n_qubits; ++k) {
    const double h = fields[k];
    if (h == 0.0) continue;
    for (std::uint64_t b = 0; b < dim; ++b) diag[b] += ((b >> k) & 1U) ? -h : h;
  }
  for (const auto& [kl, j] : couplings) {
    const std::uint64_t mask = (std::uint64_t{1} << kl.first) | (std::uint64_t{1} << kl.second);
    for (std::uint64_t b = 0; b < dim; ++b) diag[b] += (std::popcount(b & mask) & 1) ? -j : j;
  }
  return diag;
}

int IsingHamiltonian::n_fields() const {
  int c = 0;
  for (double h : fields) c += (h != 0.0);
  return c;
}

void WeightedGraph::validate() const {
  for (size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (ed.u < 0 || ed.v >= n_vertices || ed.u >= ed.v)
      throw std::invalid_argument("WeightedGraph: edge must satisfy 0 <= u < v < n");
    if (!std::isfinite(ed.weight)) throw std::invalid_argument("WeightedGraph: non-finite weight");
    if (e > 0 && !(std::pair(edges[e - 1].u, edges[e - 1].v) < std::pair(ed.u, ed.v)))
      throw std::invalid_argument("WeightedGraph: edges must be unique and sorted");
  }
}

double WeightedGraph::cut_value(const SpinAssignment& s) const {
  if (s.size() != static_cast<size_t>(n_vertices))
    throw std::invalid_argument("cut_value: spin count mismatch");
  double cut = 0.0;
  for (const auto& e : edges)
    if (s[e.u] != s[e.v]) cut += e.weight;
  return cut;
}

Qubo build_unbalanced_qubo(const MkpInstance& instance, const PenaltyConfig& penalties) {
  instance.validate();
  if (!(penalties.lambda1 > 0.0) || !(penalties.lambda2 > 0.0))
    throw std::invalid_argument("PenaltyConfig: lambda1 and lambda2 must be positive");
  const int m = instance.m, n = instance.n;
  Qubo q(m * n);
  auto var = [n](int i, int j) { return i * n + j; };

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) q.add_linear(var(i, j), -static_cast<double>(instance.values[j]));

  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j) terms.emplace_back(var(i, j), static_cast<double>(instance.weights[j]));
    add_unbalanced_penalty(q, static_cast<double>(instance.capacities[i]), terms, penalties);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < m; ++i) terms.emplace_back(var(i, j), 1.0);
    add_unbalanced_penalty(q, 1.0, terms, penalties);
  }
  return q;
}

IsingHamiltonian qubo_to_ising(const Qubo& q) {
  q.validate();
  IsingHamiltonian h(q.n_vars);
  h.offset = q.offset;
  // l x = l/2 - (l/2) z
  for (int k = 0; k < q.n_vars; ++k) {
    h.offset += q.linear[k] / 2.0;
    h.fields[k] -= q.linear[k] / 2.0;
  }
  // c x_k x_l = c/4 (1 - z_k - z_l + z_k z_l)
  for (const auto& [kl, c] : q.quadratic) {
    if (c == 0.0) continue;
    h.offset += c / 4.0;
    h.fields[kl.first] -= c / 4.0;
    h.fields[kl.second] -= c / 4.0;
    h.couplings[kl] += c / 4.0;
  }
  return h;
}

WeightedGraph qubo_to_maxcut(const Qubo& q) {
  q.validate();
  const int n = q.n_vars;
  // Full matrix with the linear terms on the diagonal, upper-triangular off it.
  std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
  for (int k = 0; k < n; ++k) mat[k][k] = q.linear[k];
  for (const auto& [kl, c] : q.quadratic) mat[kl.first][kl.second] += c;

  WeightedGraph g;
  g.n_vertices = n + 1;
  for (int k = 0; k < n; ++k) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += mat[k][j] + mat[j][k];
    const double w = kAuxEdgeSign * row;
    if (w != 0.0) g.edges.push_back({0, k + 1, w});
  }
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) {
      const double w = mat[k][j] + mat[j][k];
      if (w != 0.0) g.edges.push_back({k + 1, j + 1, w});
    }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const auto& a, const auto& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  return g;
}

BitString decode_maxcut_solution(const WeightedGraph& graph, const SpinAssignment& spins) {
  if (spins.size() != static_cast<size_t>(graph.n_vertices) || graph.n_vertices < 1)
    throw std::invalid_argument("decode_maxcut_solution: need one spin per graph vertex");
  BitString x(static_cast<size_t>(graph.n_vertices - 1));
  for (int k = 1; k < graph.n_vertices; ++k) x[k - 1] = spins[0] != spins[k] ? 1 : 0;
  return x;
}

SpinAssignment spins_from_bits(const BitString& bits) {
  SpinAssignment s(bits.size());
  for (size_t k = 0; k < bits.size(); ++k) s[k] = bits[k] ? -1 : 1;
  return s;
}

IsingHamiltonian maxcut_hamiltonian(const WeightedGraph& graph) {
  graph.validate();
  IsingHamiltonian h(graph.n_vertices);
  for (const auto& e : graph.edges) {
    h.couplings[{e.u, e.v}] += e.weight / 2.0;
    h.offset -= e.weight / 2.0;
  }
  return h;
}

double spectral_norm(const IsingHamiltonian& h) {
  if (h.n_qubits > kSpectralGuard) throw SizeError("spectral_norm: qubit count exceeds enumeration guard");
  double norm = 0.0;
  for (double e : h.diagonal()) norm = std::max(norm, std::abs(e));
  return norm;
}

IsingHamiltonian rescale(const IsingHamiltonian& h, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("rescale: d must be positive and finite");
  IsingHamiltonian out = h;
  for (auto& f : out.fields) f /= d;
  for (auto& [kl, j] : out.couplings) j /= d;
  out.offset /= d;
  out.scale *= d;
  return out;
}

}  // namespace mkpqite
