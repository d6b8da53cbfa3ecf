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

// Command-line front end: instance generation, experiment runs, the d-scaling
// sweep, report aggregation and result auditing.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mkpqite/ansatz.hpp"
#include "mkpqite/encoding.hpp"
#include "mkpqite/harness.hpp"
#include "mkpqite/instances.hpp"
#include "mkpqite/io.hpp"

using namespace mkpqite;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<TrialResult> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_results_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple knapsack via variational imaginary time evolution"};
  app.require_subcommand(1);

  // generate
  int gen_count = 68;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  int gen_min_vars = 9, gen_max_vars = 12;
  auto* gen = app.add_subcommand("generate", "Generate a random instance suite");
  gen->add_option("--count", gen_count, "Number of instances")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Suite seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--min-vars", gen_min_vars, "Smallest m*n")->capture_default_str();
  gen->add_option("--max-vars", gen_max_vars, "Largest m*n")->capture_default_str();

  // solve
  std::string solve_instances, solve_out, solve_report;
  std::vector<std::string> solve_methods = all_method_names();
  int solve_trials = 5, solve_jobs = 0;
  std::uint64_t solve_seed = 0;
  std::optional<double> solve_d, solve_tau;
  std::optional<int> solve_steps;
  std::optional<std::int64_t> solve_shots;
  double lambda1 = 10.0, lambda2 = 10.0;
  bool solve_timing = false;
  auto* solve = app.add_subcommand("solve", "Run methods x trials over an instance suite");
  solve->add_option("--instances", solve_instances, "Instance directory, file or .jsonl bundle")->required();
  solve->add_option("--methods", solve_methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
  solve->add_option("--trials", solve_trials, "Random initializations per method")->capture_default_str();
  solve->add_option("--seed", solve_seed, "Global seed")->capture_default_str();
  solve->add_option("--out", solve_out, "Results CSV")->required();
  solve->add_option("--report", solve_report, "Also write the report CSV here");
  solve->add_option("--d", solve_d, "Hamiltonian scale for qite-ihva-rescaled (default 100; 0 selects the spectral norm)");
  solve->add_option("--tau", solve_tau, "Total imaginary time");
  solve->add_option("--steps", solve_steps, "Number of Euler steps");
  solve->add_option("--shots", solve_shots, "Finite-shot extraction instead of exact argmax");
  solve->add_option("--lambda1", lambda1, "Linear penalty weight")->capture_default_str();
  solve->add_option("--lambda2", lambda2, "Quadratic penalty weight")->capture_default_str();
  solve->add_option("--jobs", solve_jobs, "Worker threads (0: all cores)")->capture_default_str();
  solve->add_flag("--timing", solve_timing, "Record wall time per trial (results no longer byte-reproducible)");

  // sweep
  std::string sweep_instance, sweep_out;
  std::vector<double> sweep_d{1, 10, 100, 1000};
  std::vector<int> sweep_steps{50, 100, 200, 500};
  double sweep_tau = 10.0;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "Best energy over a (d, N_tau) grid for qite-ihva");
  sweep->add_option("--instance", sweep_instance, "Instance JSON file")->required();
  sweep->add_option("--d", sweep_d, "Scale values")->delimiter(',')->capture_default_str();
  sweep->add_option("--steps", sweep_steps, "Step counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--tau", sweep_tau, "Total imaginary time")->capture_default_str();
  sweep->add_option("--seed", sweep_seed, "Initialization seed")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Sweep CSV")->required();

  // trace
  std::string trace_instance, trace_out, trace_method = "qite-ihva";
  std::uint64_t trace_seed = 0;
  std::optional<double> trace_d, trace_tau;
  std::optional<int> trace_steps;
  auto* trace = app.add_subcommand("trace", "Per-step VarQITE trace for one instance");
  trace->add_option("--instance", trace_instance, "Instance JSON file")->required();
  trace->add_option("--method", trace_method, "qite-ihva or qite-ihva-rescaled")->capture_default_str();
  trace->add_option("--seed", trace_seed, "Initialization seed")->capture_default_str();
  trace->add_option("--d", trace_d, "Hamiltonian scale (0 selects the spectral norm)");
  trace->add_option("--tau", trace_tau, "Total imaginary time");
  trace->add_option("--steps", trace_steps, "Number of Euler steps");
  trace->add_option("--out", trace_out, "Trace CSV")->required();

  // encode
  std::string enc_instance, enc_qubo, enc_graph, enc_circuit;
  auto* enc = app.add_subcommand("encode", "Write the QUBO, Max-Cut graph and iHVA circuit of an instance");
  enc->add_option("--instance", enc_instance, "Instance JSON file")->required();
  enc->add_option("--qubo", enc_qubo, "QUBO JSON output");
  enc->add_option("--graph", enc_graph, "Graph JSON output");
  enc->add_option("--circuit", enc_circuit, "iHVA circuit dump output");

  // report
  std::string rep_results, rep_out;
  auto* rep = app.add_subcommand("report", "Aggregate a results CSV into the method table");
  rep->add_option("--results", rep_results, "Results CSV")->required();
  rep->add_option("--out", rep_out, "Report CSV")->required();

  // audit
  std::string aud_results, aud_report;
  auto* aud = app.add_subcommand("audit", "Check a results CSV for internal consistency");
  aud->add_option("--results", aud_results, "Results CSV")->required();
  aud->add_option("--report", aud_report, "Report CSV to compare against the recomputed one");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto suite = generate_suite(gen_count, gen_seed, gen_min_vars, gen_max_vars);
      save_instances(gen_out, suite);
      std::cout << "wrote " << suite.size() << " instances to " << gen_out << '\n';
    } else if (*solve) {
      const auto suite = load_instances(solve_instances);
      std::vector<MethodSpec> methods;
      for (const auto& name : solve_methods) {
        MethodSpec m = MethodSpec::from_name(name);
        m.trials = solve_trials;
        if (solve_d && m.name == "qite-ihva-rescaled") m.d = *solve_d > 0 ? std::optional<double>(*solve_d) : std::nullopt;
        if (solve_tau) m.qite.tau = *solve_tau;
        if (solve_steps) m.qite.n_steps = *solve_steps;
        methods.push_back(std::move(m));
      }
      HarnessOptions opts;
      opts.penalties = {lambda1, lambda2};
      opts.shots = solve_shots;
      opts.jobs = solve_jobs;
      opts.record_timing = solve_timing;
      const auto out = run_experiment(suite, methods, solve_seed, opts);
      {
        auto f = open_out(solve_out);
        write_results_csv(f, out.results);
      }
      if (!solve_report.empty()) {
        auto f = open_out(solve_report);
        write_report_csv(f, out.report);
      }
      write_report_csv(std::cout, out.report);
    } else if (*sweep) {
      const auto inst = load_instances(sweep_instance);
      if (inst.size() != 1) throw std::runtime_error("sweep expects exactly one instance");
      const auto grid = scaling_sweep(inst.front(), sweep_d, sweep_steps, sweep_tau, sweep_seed);
      auto f = open_out(sweep_out);
      write_sweep_csv(f, grid);
    } else if (*trace) {
      const auto inst = load_instances(trace_instance);
      if (inst.size() != 1) throw std::runtime_error("trace expects exactly one instance");
      MethodSpec m = MethodSpec::from_name(trace_method);
      if (m.engine != EngineKind::kVarQite) throw std::runtime_error("trace supports VarQITE methods only");
      const auto ctx = InstanceContext::build(inst.front(), {});
      QiteConfig cfg = m.qite;
      cfg.seed = trace_seed;
      cfg.d = trace_d ? (*trace_d > 0 ? *trace_d : ctx.maxcut_norm) : (m.d ? *m.d : ctx.maxcut_norm);
      if (trace_tau) cfg.tau = *trace_tau;
      if (trace_steps) cfg.n_steps = *trace_steps;
      cfg.reference_min_energy = ctx.maxcut_min_energy;
      const auto res = run_varqite(build_ihva(ctx.graph, m.reps), ctx.maxcut, cfg);
      auto f = open_out(trace_out);
      write_trace_csv(f, res.trace);
      if (!res.ok) std::cerr << "trial aborted: " << res.diagnostic << '\n';
    } else if (*enc) {
      const auto inst = load_instances(enc_instance);
      if (inst.size() != 1) throw std::runtime_error("encode expects exactly one instance");
      const Qubo q = build_unbalanced_qubo(inst.front());
      const WeightedGraph g = qubo_to_maxcut(q);
      if (!enc_qubo.empty()) open_out(enc_qubo) << to_json(q).dump(2) << '\n';
      if (!enc_graph.empty()) open_out(enc_graph) << to_json(g).dump(2) << '\n';
      if (!enc_circuit.empty()) open_out(enc_circuit) << build_ihva(g).circuit.dump();
    } else if (*rep) {
      const auto rows = read_results(rep_results);
      auto f = open_out(rep_out);
      write_report_csv(f, build_report(rows));
    } else if (*aud) {
      const auto rows = read_results(aud_results);
      auto issues = audit_results(rows);
      if (!aud_report.empty()) {
        std::ifstream in(aud_report);
        std::stringstream given, recomputed;
        given << in.rdbuf();
        write_report_csv(recomputed, build_report(rows));
        if (given.str() != recomputed.str()) issues.push_back("report CSV differs from the one recomputed from results");
      }
      for (const auto& issue : issues) std::cout << "FAIL " << issue << '\n';
      std::cout << (issues.empty() ? "audit passed" : "audit failed") << " (" << rows.size() << " rows)\n";
      return issues.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
