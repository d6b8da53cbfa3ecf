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

#include "mkpqite/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mkpqite {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const MkpInstance& instance) {
  return json{{"id", instance.id},
              {"m", instance.m},
              {"n", instance.n},
              {"capacities", instance.capacities},
              {"values", instance.values},
              {"weights", instance.weights}};
}

MkpInstance instance_from_json(const json& j) {
  MkpInstance inst;
  inst.id = j.at("id").get<std::string>();
  inst.m = j.at("m").get<int>();
  inst.n = j.at("n").get<int>();
  inst.capacities = j.at("capacities").get<std::vector<int>>();
  inst.values = j.at("values").get<std::vector<int>>();
  inst.weights = j.at("weights").get<std::vector<int>>();
  if (inst.id.find(',') != std::string::npos || inst.id.find('\n') != std::string::npos)
    throw std::invalid_argument("instance id must not contain commas or newlines: " + inst.id);
  inst.validate();
  return inst;
}

json to_json(const WeightedGraph& graph) {
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back(json::array({e.u, e.v, e.weight}));
  return json{{"n", graph.n_vertices}, {"edges", edges}};
}

WeightedGraph graph_from_json(const json& j) {
  WeightedGraph g;
  g.n_vertices = j.at("n").get<int>();
  for (const auto& e : j.at("edges")) g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  g.validate();
  return g;
}

json to_json(const Qubo& qubo) {
  json quad = json::array();
  for (const auto& [kl, c] : qubo.quadratic) quad.push_back(json::array({kl.first, kl.second, c}));
  return json{{"n_vars", qubo.n_vars}, {"linear", qubo.linear}, {"quadratic", quad}, {"offset", qubo.offset}};
}

Qubo qubo_from_json(const json& j) {
  Qubo q(j.at("n_vars").get<int>());
  q.linear = j.at("linear").get<std::vector<double>>();
  q.offset = j.value("offset", 0.0);
  for (const auto& t : j.at("quadratic")) q.add_quadratic(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>());
  q.validate();
  return q;
}

std::vector<MkpInstance> load_instances(const fs::path& path) {
  std::vector<MkpInstance> out;
  auto read_file = [&](const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    if (file.extension() == ".jsonl") {
      std::string line;
      while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(instance_from_json(json::parse(line)));
      return;
    }
    const json j = json::parse(in);
    if (j.is_array())
      for (const auto& item : j) out.push_back(instance_from_json(item));
    else
      out.push_back(instance_from_json(j));
  };
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && (entry.path().extension() == ".json" || entry.path().extension() == ".jsonl"))
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) read_file(f);
  } else {
    read_file(path);
  }
  return out;
}

void save_instances(const fs::path& dir, std::span<const MkpInstance> instances) {
  fs::create_directories(dir);
  for (const auto& inst : instances) {
    std::ofstream out(dir / (inst.id + ".json"));
    if (!out) throw std::runtime_error("cannot write instance " + inst.id);
    out << to_json(inst).dump() << '\n';
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

}  // namespace

void write_results_csv(std::ostream& os, std::span<const TrialResult> results) {
  os << kResultsHeader << '\n';
  for (const auto& r : results) {
    os << r.instance_id << ',' << r.method << ',' << r.trial << ',' << r.seed << ',' << r.bitstring << ','
       << r.mkp_objective << ',' << (r.feasible ? 1 : 0) << ',' << (r.optimal ? 1 : 0) << ','
       << format_double(r.qubo_objective) << ',' << format_double(r.opt_gap) << ',' << format_double(r.opt_gap_mkp)
       << ',' << format_double(r.final_energy) << ',' << r.steps << ',' << format_double(r.runtime_ms) << '\n';
  }
}

std::vector<TrialResult> read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kResultsHeader) throw std::runtime_error("results CSV: unexpected header");
  std::vector<TrialResult> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 14) throw std::runtime_error("results CSV line " + std::to_string(lineno) + ": expected 14 fields");
    TrialResult r;
    r.instance_id = f[0];
    r.method = f[1];
    r.trial = std::stoi(f[2]);
    r.seed = std::stoull(f[3]);
    r.bitstring = f[4];
    r.mkp_objective = std::stol(f[5]);
    r.feasible = f[6] == "1";
    r.optimal = f[7] == "1";
    r.qubo_objective = parse_double(f[8]);
    r.opt_gap = parse_double(f[9]);
    r.opt_gap_mkp = parse_double(f[10]);
    r.final_energy = parse_double(f[11]);
    r.steps = std::stoi(f[12]);
    r.runtime_ms = parse_double(f[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
  os << kReportHeader << '\n';
  for (const auto& m : report.methods)
    os << m.method << ',' << format_double(m.feasibility_best) << ',' << format_double(m.optimality_best) << ','
       << format_double(m.mean_feasibility_rate) << ',' << format_double(m.mean_optimality_rate) << ','
       << format_double(m.mean_optimality_gap) << '\n';
}

void write_trace_csv(std::ostream& os, std::span<const QiteStep> trace) {
  os << kTraceHeader << '\n';
  for (const auto& s : trace)
    os << s.step << ',' << format_double(s.tau) << ',' << format_double(s.energy) << ','
       << format_double(s.approx_ratio) << ',' << format_double(s.best_energy) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepGrid& grid) {
  os << kSweepHeader << '\n';
  for (const auto& p : grid.points)
    os << grid.instance_id << ',' << format_double(p.d) << ',' << p.n_steps << ',' << format_double(grid.tau) << ','
       << format_double(p.best_energy) << ',' << format_double(grid.min_energy) << ','
       << format_double(grid.spectral_norm) << '\n';
}

}  // namespace mkpqite
