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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mkpqite/ansatz.hpp"
#include "mkpqite/encoding.hpp"
#include "mkpqite/engines.hpp"
#include "mkpqite/instances.hpp"

namespace mkpqite {

enum class EngineKind { kVarQite, kVqe };

/// Default d of qite-ihva-rescaled. Chosen with the sweep on a calibration
/// suite; d = spectral norm shrinks the evolution so much that it stalls.
inline constexpr double kRescaledD = 100.0;

/// One compared method. iHVA methods solve the Max-Cut reduction of the
/// QUBO; ma-QAOA and HEA solve the QUBO's Ising form directly.
struct MethodSpec {
  std::string name;
  EngineKind engine = EngineKind::kVarQite;
  AnsatzKind ansatz = AnsatzKind::kIhva;
  /// Hamiltonian scale for VarQITE; unset means d = spectral norm.
  std::optional<double> d = 1.0;
  int trials = 5;
  int reps = 1;
  QiteConfig qite;
  VqeConfig vqe;

  bool maxcut_path() const { return ansatz == AnsatzKind::kIhva; }

  /// qite-ihva-rescaled, qite-ihva, ihva, ma-qaoa or hea with defaults.
  static MethodSpec from_name(std::string_view name);
};

std::vector<std::string> all_method_names();

struct HarnessOptions {
  PenaltyConfig penalties;
  /// Finite-shot extraction; exact amplitude argmax when unset.
  std::optional<std::int64_t> shots;
  /// Record wall time in TrialResult::runtime_ms (otherwise 0, which keeps
  /// result files byte-reproducible).
  bool record_timing = false;
  /// Worker threads for run_experiment; 0 means hardware concurrency.
  int jobs = 0;
};

struct TrialResult {
  std::string instance_id;
  std::string method;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string bitstring;  // decoded QUBO assignment, variable 0 first
  long mkp_objective = 0;
  bool feasible = false;
  bool optimal = false;
  double qubo_objective = 0.0;
  double opt_gap = 0.0;      // QUBO-objective gap, NaN when C_opt == 0
  double opt_gap_mkp = 0.0;  // 1 - value / optimal value, NaN when optimum is 0
  double final_energy = 0.0;
  int steps = 0;
  double runtime_ms = 0.0;
  std::string diagnostic;  // empty on success; not serialized
};

/// Everything a trial needs that depends only on the instance.
struct InstanceContext {
  MkpInstance instance;
  Qubo qubo;
  IsingHamiltonian qubo_ising;
  WeightedGraph graph;
  IsingHamiltonian maxcut;
  MkpOptimum optimum;
  double qubo_min = 0.0;
  BitString qubo_argmin;
  double maxcut_min_energy = 0.0;
  double maxcut_norm = 0.0;

  static InstanceContext build(const MkpInstance& instance, const PenaltyConfig& penalties);
};

/// Brute-force minimum of a QUBO (smallest index on ties).
std::pair<double, BitString> brute_force_qubo_min(const Qubo& q);

/// hash(global seed, instance id, method name, trial index).
std::uint64_t derive_trial_seed(std::uint64_t global_seed, std::string_view instance_id, std::string_view method,
                                int trial);

/// Optimality gap (C_vqa - C_opt) / |C_opt|; NaN when C_opt == 0.
double optimality_gap(double c_vqa, double c_opt);

TrialResult run_trial(const InstanceContext& ctx, const MethodSpec& method, int trial, std::uint64_t trial_seed,
                      const HarnessOptions& options = {});
TrialResult run_trial(const MkpInstance& instance, const MethodSpec& method, std::uint64_t trial_seed,
                      const HarnessOptions& options = {});

/// Fractions over the trials of one instance and method. Throw on empty input.
double feasibility_rate(std::span<const TrialResult> results);
double optimality_rate(std::span<const TrialResult> results);
/// Mean gap over trials with a defined gap; NaN when none is defined.
double mean_optimality_gap(std::span<const TrialResult> results);

struct MethodReport {
  std::string method;
  double feasibility_best = 0.0;  // fraction of instances with >= 1 feasible trial
  double optimality_best = 0.0;   // fraction of instances with >= 1 optimal trial
  double mean_feasibility_rate = 0.0;
  double mean_optimality_rate = 0.0;
  double mean_optimality_gap = 0.0;  // over instances with a defined gap
  int instances = 0;
  int gap_excluded = 0;  // instances with C_opt == 0
};

struct ExperimentReport {
  std::vector<MethodReport> methods;
};

/// Aggregates trial rows per method, in first-appearance order of methods.
ExperimentReport build_report(std::span<const TrialResult> results);

struct ExperimentOutput {
  ExperimentReport report;
  std::vector<TrialResult> results;  // sorted by (instance, method order, trial)
};

ExperimentOutput run_experiment(std::span<const MkpInstance> suite, std::span<const MethodSpec> methods,
                                std::uint64_t global_seed, const HarnessOptions& options = {});

struct SweepPoint {
  double d = 1.0;
  int n_steps = 0;
  double best_energy = 0.0;  // lowest unscaled Max-Cut energy along the trace
};

struct SweepGrid {
  std::string instance_id;
  double tau = 10.0;
  double min_energy = 0.0;  // exhaustive Max-Cut ground energy
  double spectral_norm = 0.0;
  std::vector<SweepPoint> points;  // d-major order
};

/// qite-ihva over a (d, N_tau) grid at fixed tau, all cells from the same
/// seeded initial parameters.
SweepGrid scaling_sweep(const MkpInstance& instance, std::span<const double> d_values,
                        std::span<const int> n_steps_values, double tau = 10.0, std::uint64_t seed = 0,
                        const PenaltyConfig& penalties = {});

/// Consistency problems in a results table (empty when clean).
std::vector<std::string> audit_results(std::span<const TrialResult> results);

}  // namespace mkpqite
