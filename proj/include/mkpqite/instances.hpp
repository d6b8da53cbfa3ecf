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
#include <string>
#include <vector>

#include "mkpqite/common.hpp"

namespace mkpqite {

/// Multiple knapsack instance: m knapsacks with capacities, n items with
/// values and weights. Each item goes into at most one knapsack.
struct MkpInstance {
  std::string id;
  int m = 0;
  int n = 0;
  std::vector<int> capacities;
  std::vector<int> values;
  std::vector<int> weights;

  /// Throws std::invalid_argument on inconsistent sizes or non-positive data.
  void validate() const;

  bool operator==(const MkpInstance&) const = default;
};

/// m x n binary matrix, stored row-major: cell (i, j) is x[i * n + j].
/// The same flattening defines the QUBO variable index of cell (i, j).
struct MkpAssignment {
  int m = 0;
  int n = 0;
  std::vector<std::uint8_t> x;

  MkpAssignment() = default;
  MkpAssignment(int m_, int n_) : m(m_), n(n_), x(static_cast<size_t>(m_ * n_), 0) {}

  static MkpAssignment from_bits(int m, int n, const BitString& bits);

  std::uint8_t at(int i, int j) const { return x[static_cast<size_t>(i * n + j)]; }
  std::uint8_t& at(int i, int j) { return x[static_cast<size_t>(i * n + j)]; }

  bool operator==(const MkpAssignment&) const = default;
};

struct Constraint {
  enum class Kind { kCapacity, kItem };
  Kind kind;
  int index;  // knapsack index for kCapacity, item index for kItem (0-based)

  bool operator==(const Constraint&) const = default;
};

struct MkpEvaluation {
  long objective = 0;
  bool feasible = true;
  std::vector<Constraint> violated_constraints;
};

MkpEvaluation evaluate(const MkpInstance& instance,
                       const MkpAssignment& assignment);

struct MkpOptimum {
  MkpAssignment assignment;
  MkpEvaluation evaluation;
};

/// Largest m * n accepted by the exhaustive oracle.
inline constexpr int kEnumerationGuard = 24;

/// Exhaustive optimum over the (m+1)^n placements. Ties go to the
/// lexicographically smallest flattened assignment. Throws SizeError above
/// the enumeration guard.
MkpOptimum brute_force_optimum(const MkpInstance& instance);

/// Value of the unbalanced-penalty objective
///   -sum v_j x_ij - l1 [sum h1_i + sum h2_j] + l2 [sum h1_i^2 + sum h2_j^2]
/// evaluated directly from its definition.
double unbalanced_objective(const MkpInstance& instance, const MkpAssignment& assignment, double lambda1,
                            double lambda2);

struct GeneratorOptions {
  /// Also redraw instances whose unbalanced-penalty minimizer is not a
  /// feasible optimal packing (most raw draws at these ranges are).
  bool require_penalty_valid = true;
  double lambda1 = 10.0;
  double lambda2 = 10.0;
};

/// True when every minimizer of the unbalanced objective is feasible and
/// reaches the optimal packing value.
bool penalty_valid(const MkpInstance& instance, double lambda1 = 10.0, double lambda2 = 10.0);

/// Seeded random instance with w, v in [1, 10] and W in [5, 15]; instances
/// whose optimum packs nothing are redrawn (and, by default, instances that
/// fail penalty_valid). Requires 1 <= m <= 3, 1 <= n <= 4.
MkpInstance generate_instance(std::uint64_t seed, int m, int n, const GeneratorOptions& options = {});

/// A suite of `count` distinct instances whose QUBO size m * n lies in
/// [min_vars, max_vars] (defaults give the 9-12 variable shapes (3,3) and
/// (3,4)). Instance k is derived from hash(seed, k).
std::vector<MkpInstance> generate_suite(int count, std::uint64_t seed, int min_vars = 9, int max_vars = 12,
                                        const GeneratorOptions& options = {});

}  // namespace mkpqite
