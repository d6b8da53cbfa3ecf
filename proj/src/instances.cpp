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

#include "mkpqite/instances.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace mkpqite {

void MkpInstance::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("instance " + id + ": m and n must be >= 1");
  if (capacities.size() != static_cast<size_t>(m) || values.size() != static_cast<size_t>(n) ||
      weights.size() != static_cast<size_t>(n))
    throw std::invalid_argument("instance " + id + ": array lengths do not match m/n");
  auto positive = [](const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int a) { return a > 0; });
  };
  if (!positive(capacities) || !positive(values) || !positive(weights))
    throw std::invalid_argument("instance " + id + ": capacities, values and weights must be positive");
}

MkpAssignment MkpAssignment::from_bits(int m, int n, const BitString& bits) {
  if (bits.size() != static_cast<size_t>(m * n))
    throw std::invalid_argument("assignment bit-string length does not match m * n");
  MkpAssignment a(m, n);
  a.x = bits;
  return a;
}

MkpEvaluation evaluate(const MkpInstance& instance, const MkpAssignment& assignment) {
  if (assignment.m != instance.m || assignment.n != instance.n ||
      assignment.x.size() != static_cast<size_t>(instance.m * instance.n))
    throw std::invalid_argument("assignment dimensions do not match instance " + instance.id);

  MkpEvaluation ev;
  for (int i = 0; i < instance.m; ++i) {
    long load = 0;
    for (int j = 0; j < instance.n; ++j) {
      if (assignment.at(i, j)) {
        ev.objective += instance.values[j];
        load += instance.weights[j];
      }
    }
    if (load > instance.capacities[i])
      ev.violated_constraints.push_back({Constraint::Kind::kCapacity, i});
  }
  for (int j = 0; j < instance.n; ++j) {
    int placed = 0;
    for (int i = 0; i < instance.m; ++i) placed += assignment.at(i, j);
    if (placed > 1) ev.violated_constraints.push_back({Constraint::Kind::kItem, j});
  }
  ev.feasible = ev.violated_constraints.empty();
  return ev;
}

MkpOptimum brute_force_optimum(const MkpInstance& instance) {
  instance.validate();
  if (instance.m * instance.n > kEnumerationGuard)
    throw SizeError("brute_force_optimum: m * n exceeds enumeration guard");

  const int m = instance.m, n = instance.n;
  // place[j] in [0, m]: m means unplaced.
  std::vector<int> place(static_cast<size_t>(n), m);
  std::vector<long> load(static_cast<size_t>(m), 0);

  MkpAssignment best(m, n);
  long best_value = 0;  // the empty packing is always feasible

  MkpAssignment current(m, n);
  // Odometer over (m+1)^n placements.
  while (true) {
    std::fill(load.begin(), load.end(), 0);
    long value = 0;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      if (place[j] < m) {
        load[place[j]] += instance.weights[j];
        value += instance.values[j];
        if (load[place[j]] > instance.capacities[place[j]]) ok = false;
      }
    }
    if (ok && value >= best_value) {
      std::fill(current.x.begin(), current.x.end(), 0);
      for (int j = 0; j < n; ++j)
        if (place[j] < m) current.at(place[j], j) = 1;
      if (value > best_value || current.x < best.x) {
        best_value = value;
        best = current;
      }
    }
    int j = 0;
    while (j < n && place[j] == 0) {
      place[j] = m;
      ++j;
    }
    if (j == n) break;
    // Count down so the unplaced state is visited first.
    --place[j];
  }

  MkpOptimum out{best, evaluate(instance, best)};
  return out;
}

namespace {

MkpInstance draw_instance(Rng& rng, int m, int n) {
  MkpInstance inst;
  inst.m = m;
  inst.n = n;
  for (int j = 0; j < n; ++j) inst.weights.push_back(static_cast<int>(rng.uniform_int(1, 10)));
  for (int j = 0; j < n; ++j) inst.values.push_back(static_cast<int>(rng.uniform_int(1, 10)));
  for (int i = 0; i < m; ++i) inst.capacities.push_back(static_cast<int>(rng.uniform_int(5, 15)));
  return inst;
}

}  // namespace

double unbalanced_objective(const MkpInstance& instance, const MkpAssignment& a, double lambda1, double lambda2) {
  if (a.m != instance.m || a.n != instance.n) throw std::invalid_argument("assignment dimensions do not match instance");
  double value = 0.0, h_sum = 0.0, h_sq = 0.0;
  for (int i = 0; i < instance.m; ++i) {
    double h1 = instance.capacities[i];
    for (int j = 0; j < instance.n; ++j) {
      value += instance.values[j] * a.at(i, j);
      h1 -= instance.weights[j] * a.at(i, j);
    }
    h_sum += h1;
    h_sq += h1 * h1;
  }
  for (int j = 0; j < instance.n; ++j) {
    double h2 = 1.0;
    for (int i = 0; i < instance.m; ++i) h2 -= a.at(i, j);
    h_sum += h2;
    h_sq += h2 * h2;
  }
  return -value - lambda1 * h_sum + lambda2 * h_sq;
}

bool penalty_valid(const MkpInstance& instance, double lambda1, double lambda2) {
  const long best_value = brute_force_optimum(instance).evaluation.objective;
  const int vars = instance.m * instance.n;
  const std::uint64_t count = std::uint64_t{1} << vars;
  std::vector<double> f(count);
  MkpAssignment a(instance.m, instance.n);
  auto load = [&](std::uint64_t b) {
    for (int k = 0; k < vars; ++k) a.x[static_cast<size_t>(k)] = (b >> k) & 1U;
  };
  for (std::uint64_t b = 0; b < count; ++b) {
    load(b);
    f[b] = unbalanced_objective(instance, a, lambda1, lambda2);
  }
  const double fmin = *std::min_element(f.begin(), f.end());
  for (std::uint64_t b = 0; b < count; ++b) {
    if (f[b] > fmin + 1e-9) continue;
    load(b);
    const MkpEvaluation ev = evaluate(instance, a);
    if (!ev.feasible || ev.objective != best_value) return false;
  }
  return true;
}

MkpInstance generate_instance(std::uint64_t seed, int m, int n, const GeneratorOptions& options) {
  if (m < 1 || m > 3 || n < 1 || n > 4)
    throw std::invalid_argument("generate_instance: requires 1 <= m <= 3 and 1 <= n <= 4");
  Rng rng(hash_combine(seed, static_cast<std::uint64_t>(m * 16 + n)));
  while (true) {
    MkpInstance inst = draw_instance(rng, m, n);
    inst.id = "mkp-s" + std::to_string(seed) + "-m" + std::to_string(m) + "-n" + std::to_string(n);
    if (brute_force_optimum(inst).evaluation.objective <= 0) continue;
    if (options.require_penalty_valid && !penalty_valid(inst, options.lambda1, options.lambda2)) continue;
    return inst;
  }
}

std::vector<MkpInstance> generate_suite(int count, std::uint64_t seed, int min_vars, int max_vars,
                                        const GeneratorOptions& options) {
  if (count < 0) throw std::invalid_argument("generate_suite: negative count");
  std::vector<std::pair<int, int>> shapes;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 4; ++n)
      if (m * n >= min_vars && m * n <= max_vars) shapes.emplace_back(m, n);
  if (shapes.empty()) throw std::invalid_argument("generate_suite: no (m, n) shape fits the variable range");

  std::vector<MkpInstance> suite;
  suite.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = hash_combine(seed, static_cast<std::uint64_t>(k));
    Rng pick(s);
    auto [m, n] = shapes[static_cast<size_t>(pick.uniform_int(0, static_cast<std::int64_t>(shapes.size()) - 1))];
    MkpInstance inst = generate_instance(s, m, n, options);
    inst.id = "mkp-" + std::to_string(seed) + "-" + std::to_string(k);
    suite.push_back(std::move(inst));
  }
  return suite;
}

}  // namespace mkpqite
