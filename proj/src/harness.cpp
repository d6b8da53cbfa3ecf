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

#include "mkpqite/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace mkpqite {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_objective(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

BitString bits_of_index(std::uint64_t index, int n) {
  BitString bits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) bits[k] = (index >> k) & 1U;
  return bits;
}

// Finite-shot extraction: most frequent outcome, smallest basis index on ties.
BitString most_frequent(const StateVector& state, std::int64_t shots, std::uint64_t seed) {
  const auto hist = sample(state, shots, seed);
  std::uint64_t best_index = 0;
  std::int64_t best_count = -1;
  for (const auto& [label, count] : hist) {
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < label.size(); ++k)
      if (label[k] == '1') index |= std::uint64_t{1} << k;
    if (count > best_count || (count == best_count && index < best_index)) {
      best_count = count;
      best_index = index;
    }
  }
  return bits_of_index(best_index, state.n_qubits);
}

}  // namespace

MethodSpec MethodSpec::from_name(std::string_view name) {
  MethodSpec m;
  m.name = std::string(name);
  if (name == "qite-ihva-rescaled") {
    m.engine = EngineKind::kVarQite;
    m.ansatz = AnsatzKind::kIhva;
    m.d = kRescaledD;
  } else if (name == "qite-ihva") {
    m.engine = EngineKind::kVarQite;
    m.ansatz = AnsatzKind::kIhva;
  } else if (name == "ihva") {
    m.engine = EngineKind::kVqe;
    m.ansatz = AnsatzKind::kIhva;
  } else if (name == "ma-qaoa") {
    m.engine = EngineKind::kVqe;
    m.ansatz = AnsatzKind::kMaQaoa;
  } else if (name == "hea") {
    m.engine = EngineKind::kVqe;
    m.ansatz = AnsatzKind::kHea;
  } else {
    throw std::invalid_argument("unknown method: " + std::string(name));
  }
  return m;
}

std::vector<std::string> all_method_names() {
  return {"qite-ihva-rescaled", "qite-ihva", "ihva", "ma-qaoa", "hea"};
}

std::pair<double, BitString> brute_force_qubo_min(const Qubo& q) {
  if (q.n_vars > kEnumerationGuard) throw SizeError("brute_force_qubo_min: too many variables");
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t arg = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << q.n_vars); ++b) {
    const double v = q.evaluate_index(b);
    if (v < best) {
      best = v;
      arg = b;
    }
  }
  return {best, bits_of_index(arg, q.n_vars)};
}

InstanceContext InstanceContext::build(const MkpInstance& instance, const PenaltyConfig& penalties) {
  InstanceContext ctx;
  ctx.instance = instance;
  ctx.qubo = build_unbalanced_qubo(instance, penalties);
  ctx.qubo_ising = qubo_to_ising(ctx.qubo);
  ctx.graph = qubo_to_maxcut(ctx.qubo);
  ctx.maxcut = maxcut_hamiltonian(ctx.graph);
  ctx.optimum = brute_force_optimum(instance);
  std::tie(ctx.qubo_min, ctx.qubo_argmin) = brute_force_qubo_min(ctx.qubo);
  const auto diag = ctx.maxcut.diagonal();
  ctx.maxcut_min_energy = *std::min_element(diag.begin(), diag.end());
  ctx.maxcut_norm = spectral_norm(ctx.maxcut);
  return ctx;
}

std::uint64_t derive_trial_seed(std::uint64_t global_seed, std::string_view instance_id, std::string_view method,
                                int trial) {
  std::uint64_t h = hash_combine(global_seed, instance_id);
  h = hash_combine(h, method);
  return hash_combine(h, static_cast<std::uint64_t>(trial));
}

double optimality_gap(double c_vqa, double c_opt) {
  if (c_opt == 0.0) return kNaN;
  return (c_vqa - c_opt) / std::abs(c_opt);
}

TrialResult run_trial(const InstanceContext& ctx, const MethodSpec& method, int trial, std::uint64_t trial_seed,
                      const HarnessOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TrialResult r;
  r.instance_id = ctx.instance.id;
  r.method = method.name;
  r.trial = trial;
  r.seed = trial_seed;

  const IsingHamiltonian& h = method.maxcut_path() ? ctx.maxcut : ctx.qubo_ising;
  AnsatzSpec ansatz = [&] {
    switch (method.ansatz) {
      case AnsatzKind::kIhva: return build_ihva(ctx.graph, method.reps);
      case AnsatzKind::kMaQaoa: return build_maqaoa(h, method.reps);
      case AnsatzKind::kHea: return build_hea(h.n_qubits, method.reps);
    }
    throw std::logic_error("unhandled ansatz kind");
  }();

  std::vector<double> theta;
  bool ok = true;
  if (method.engine == EngineKind::kVarQite) {
    QiteConfig cfg = method.qite;
    cfg.seed = trial_seed;
    cfg.d = method.d ? *method.d : (method.maxcut_path() ? ctx.maxcut_norm : spectral_norm(h));
    if (method.maxcut_path()) cfg.reference_min_energy = ctx.maxcut_min_energy;
    QiteResult q = run_varqite(ansatz, h, cfg);
    theta = q.best_theta;
    r.final_energy = q.best_energy;
    r.steps = static_cast<int>(q.trace.size()) - 1;
    ok = q.ok;
    r.diagnostic = q.diagnostic;
  } else {
    VqeConfig cfg = method.vqe;
    cfg.seed = trial_seed;
    VqeResult v = run_vqe(ansatz, h, cfg);
    theta = v.theta;
    r.final_energy = v.energy;
    r.steps = v.iterations;
    ok = v.ok && std::isfinite(v.energy);
    r.diagnostic = v.diagnostic;
  }

  const StateVector state = run(ansatz.circuit, theta);
  const BitString measured = options.shots ? most_frequent(state, *options.shots, hash_combine(trial_seed, "shots"))
                                           : argmax_bitstring(state);
  const BitString x = method.maxcut_path() ? decode_maxcut_solution(ctx.graph, spins_from_bits(measured)) : measured;

  const MkpEvaluation ev = evaluate(ctx.instance, MkpAssignment::from_bits(ctx.instance.m, ctx.instance.n, x));
  r.bitstring = to_string(x);
  r.mkp_objective = ev.objective;
  r.qubo_objective = ctx.qubo.evaluate(x);
  r.feasible = ok && ev.feasible;
  r.optimal = r.feasible && same_objective(r.qubo_objective, ctx.qubo_min);
  r.opt_gap = optimality_gap(r.qubo_objective, ctx.qubo_min);
  const long best_value = ctx.optimum.evaluation.objective;
  r.opt_gap_mkp = best_value == 0 ? kNaN : 1.0 - static_cast<double>(r.mkp_objective) / static_cast<double>(best_value);
  if (options.record_timing)
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

TrialResult run_trial(const MkpInstance& instance, const MethodSpec& method, std::uint64_t trial_seed,
                      const HarnessOptions& options) {
  return run_trial(InstanceContext::build(instance, options.penalties), method, 0, trial_seed, options);
}

double feasibility_rate(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("feasibility_rate: no trials");
  const auto n = std::count_if(results.begin(), results.end(), [](const TrialResult& r) { return r.feasible; });
  return static_cast<double>(n) / static_cast<double>(results.size());
}

double optimality_rate(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("optimality_rate: no trials");
  const auto n = std::count_if(results.begin(), results.end(), [](const TrialResult& r) { return r.optimal; });
  return static_cast<double>(n) / static_cast<double>(results.size());
}

double mean_optimality_gap(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("mean_optimality_gap: no trials");
  double sum = 0.0;
  int count = 0;
  for (const auto& r : results) {
    if (std::isnan(r.opt_gap)) continue;
    sum += r.opt_gap;
    ++count;
  }
  return count ? sum / count : kNaN;
}

ExperimentReport build_report(std::span<const TrialResult> results) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, std::vector<TrialResult>>> grouped;  // method -> instance -> trials
  for (const auto& r : results) {
    if (!grouped.count(r.method)) order.push_back(r.method);
    grouped[r.method][r.instance_id].push_back(r);
  }
  ExperimentReport report;
  for (const auto& method : order) {
    MethodReport row;
    row.method = method;
    double gap_sum = 0.0;
    int gap_count = 0;
    for (const auto& [id, trials] : grouped[method]) {
      ++row.instances;
      const double fr = feasibility_rate(trials);
      const double orate = optimality_rate(trials);
      row.mean_feasibility_rate += fr;
      row.mean_optimality_rate += orate;
      row.feasibility_best += fr > 0.0 ? 1.0 : 0.0;
      row.optimality_best += orate > 0.0 ? 1.0 : 0.0;
      const double gap = mean_optimality_gap(trials);
      if (std::isnan(gap)) {
        ++row.gap_excluded;
        std::cerr << "warning: instance " << id << " has zero optimal objective; excluded from mean gap\n";
      } else {
        gap_sum += gap;
        ++gap_count;
      }
    }
    const double n = row.instances;
    row.mean_feasibility_rate /= n;
    row.mean_optimality_rate /= n;
    row.feasibility_best /= n;
    row.optimality_best /= n;
    row.mean_optimality_gap = gap_count ? gap_sum / gap_count : kNaN;
    report.methods.push_back(row);
  }
  return report;
}

ExperimentOutput run_experiment(std::span<const MkpInstance> suite, std::span<const MethodSpec> methods,
                                std::uint64_t global_seed, const HarnessOptions& options) {
  if (suite.empty()) throw std::invalid_argument("run_experiment: empty instance suite");
  if (methods.empty()) throw std::invalid_argument("run_experiment: no methods");
  {
    std::set<std::string> ids;
    for (const auto& inst : suite)
      if (!ids.insert(inst.id).second) throw std::invalid_argument("run_experiment: duplicate instance id " + inst.id);
  }

  std::vector<InstanceContext> contexts;
  contexts.reserve(suite.size());
  for (const auto& inst : suite) contexts.push_back(InstanceContext::build(inst, options.penalties));

  struct Work {
    std::size_t instance;
    std::size_t method;
    int trial;
  };
  std::vector<Work> work;
  for (std::size_t i = 0; i < suite.size(); ++i)
    for (std::size_t m = 0; m < methods.size(); ++m)
      for (int t = 0; t < methods[m].trials; ++t) work.push_back({i, m, t});

  ExperimentOutput out;
  out.results.resize(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t w = next++; w < work.size(); w = next++) {
      const auto& item = work[w];
      const auto& ctx = contexts[item.instance];
      const auto& method = methods[item.method];
      try {
        const auto seed = derive_trial_seed(global_seed, ctx.instance.id, method.name, item.trial);
        out.results[w] = run_trial(ctx, method, item.trial, seed, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int jobs = options.jobs > 0 ? options.jobs : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(work.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  // Work was enumerated in (instance, method, trial) order, so results already are.
  out.report = build_report(out.results);
  return out;
}

SweepGrid scaling_sweep(const MkpInstance& instance, std::span<const double> d_values,
                        std::span<const int> n_steps_values, double tau, std::uint64_t seed,
                        const PenaltyConfig& penalties) {
  if (d_values.empty() || n_steps_values.empty()) throw std::invalid_argument("scaling_sweep: empty grid");
  const Qubo qubo = build_unbalanced_qubo(instance, penalties);
  const WeightedGraph graph = qubo_to_maxcut(qubo);
  const IsingHamiltonian h = maxcut_hamiltonian(graph);
  const AnsatzSpec ansatz = build_ihva(graph, 1);
  const auto diag = h.diagonal();

  SweepGrid grid;
  grid.instance_id = instance.id;
  grid.tau = tau;
  grid.min_energy = *std::min_element(diag.begin(), diag.end());
  grid.spectral_norm = spectral_norm(h);
  const auto theta0 = initial_parameters(ansatz.circuit.n_params, InitMode::kRandomUniform,
                                         hash_combine(hash_combine(seed, instance.id), "sweep"));
  for (double d : d_values) {
    for (int steps : n_steps_values) {
      QiteConfig cfg;
      cfg.tau = tau;
      cfg.n_steps = steps;
      cfg.d = d;
      cfg.initial_theta = theta0;
      const QiteResult res = run_varqite(ansatz, h, cfg);
      grid.points.push_back({d, steps, res.best_energy});
    }
  }
  return grid;
}

std::vector<std::string> audit_results(std::span<const TrialResult> results) {
  std::vector<std::string> issues;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialResult*>> groups;
  for (const auto& r : results) groups[{r.method, r.instance_id}].push_back(&r);

  std::map<std::string, std::size_t> trials_per_method;
  for (const auto& [key, rows] : groups) {
    const auto& [method, id] = key;
    const std::string where = method + "/" + id;
    auto it = trials_per_method.find(method);
    if (it == trials_per_method.end())
      trials_per_method[method] = rows.size();
    else if (it->second != rows.size())
      issues.push_back(where + ": trial count differs from other instances of the method");

    std::set<int> indices;
    for (const auto* r : rows) indices.insert(r->trial);
    if (indices.size() != rows.size() || *indices.begin() != 0 || *indices.rbegin() != static_cast<int>(rows.size()) - 1)
      issues.push_back(where + ": trial indices are not 0..T-1 without repeats");

    std::optional<double> optimum;
    for (const auto* r : rows) {
      if (r->optimal && !r->feasible) issues.push_back(where + ": optimal trial " + std::to_string(r->trial) + " is infeasible");
      if (!std::isnan(r->opt_gap) && r->opt_gap < -1e-9)
        issues.push_back(where + ": negative optimality gap in trial " + std::to_string(r->trial));
      if (r->optimal) {
        if (!std::isnan(r->opt_gap) && std::abs(r->opt_gap) > 1e-9)
          issues.push_back(where + ": optimal trial " + std::to_string(r->trial) + " has non-zero gap");
        if (optimum && !same_objective(r->qubo_objective, *optimum))
          issues.push_back(where + ": optimal trials disagree on the optimal objective");
        optimum = r->qubo_objective;
      }
    }
    if (optimum)
      for (const auto* r : rows)
        if (r->feasible && r->qubo_objective < *optimum - 1e-9 * std::max(1.0, std::abs(*optimum)))
          issues.push_back(where + ": feasible trial " + std::to_string(r->trial) + " beats the recorded optimum");
  }

  for (const auto& row : build_report(results).methods) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(row.feasibility_best) || !in_unit(row.optimality_best) || !in_unit(row.mean_feasibility_rate) ||
        !in_unit(row.mean_optimality_rate))
      issues.push_back(row.method + ": report rate outside [0, 1]");
    if (row.feasibility_best + 1e-12 < row.mean_feasibility_rate)
      issues.push_back(row.method + ": best-of-trials feasibility below mean feasibility rate");
    if (row.optimality_best + 1e-12 < row.mean_optimality_rate)
      issues.push_back(row.method + ": best-of-trials optimality below mean optimality rate");
    if (row.mean_optimality_rate > row.mean_feasibility_rate + 1e-12)
      issues.push_back(row.method + ": optimality rate exceeds feasibility rate");
  }
  return issues;
}

}  // namespace mkpqite
