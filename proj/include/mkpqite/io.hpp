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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mkpqite/encoding.hpp"
#include "mkpqite/engines.hpp"
#include "mkpqite/harness.hpp"
#include "mkpqite/instances.hpp"

namespace mkpqite {

// Instance JSON: {"id", "m", "n", "capacities", "values", "weights"}.
nlohmann::json to_json(const MkpInstance& instance);
MkpInstance instance_from_json(const nlohmann::json& j);

// Graph JSON: {"n": vertices, "edges": [[u, v, w], ...]}.
nlohmann::json to_json(const WeightedGraph& graph);
WeightedGraph graph_from_json(const nlohmann::json& j);

// QUBO JSON: {"n_vars", "linear": [...], "quadratic": [[k, l, c], ...], "offset"}.
nlohmann::json to_json(const Qubo& qubo);
Qubo qubo_from_json(const nlohmann::json& j);

/// Reads a directory of *.json files (sorted by name), a single instance
/// file, a JSON array, or a JSON-lines bundle (.jsonl).
std::vector<MkpInstance> load_instances(const std::filesystem::path& path);
/// Writes one <id>.json per instance into `dir`.
void save_instances(const std::filesystem::path& dir, std::span<const MkpInstance> instances);

/// %.12g text form used in every CSV ("nan" for NaN). Stable across runs,
/// exact to about 12 significant digits.
std::string format_double(double v);

inline constexpr const char* kResultsHeader =
    "instance_id,method,trial,seed,bitstring,mkp_objective,feasible,optimal,qubo_objective,opt_gap,opt_gap_mkp,"
    "final_energy,steps,runtime_ms";
inline constexpr const char* kReportHeader =
    "method,feasibility_best,optimality_best,mean_feasibility_rate,mean_optimality_rate,mean_optimality_gap";
inline constexpr const char* kTraceHeader = "step,tau,energy,approx_ratio,best_energy";
inline constexpr const char* kSweepHeader = "instance_id,d,n_steps,tau,best_energy,min_energy,spectral_norm";

void write_results_csv(std::ostream& os, std::span<const TrialResult> results);
std::vector<TrialResult> read_results_csv(std::istream& is);
void write_report_csv(std::ostream& os, const ExperimentReport& report);
void write_trace_csv(std::ostream& os, std::span<const QiteStep> trace);
void write_sweep_csv(std::ostream& os, const SweepGrid& grid);

}  // namespace mkpqite
