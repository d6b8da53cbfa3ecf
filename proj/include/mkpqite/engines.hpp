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
#include <vector>

#include <Eigen/Dense>

#include "mkpqite/ansatz.hpp"
#include "mkpqite/encoding.hpp"
#include "mkpqite/simulator.hpp"

namespace mkpqite {

enum class InitMode { kRandomUniform, kZeros };

/// Initial parameters: uniform over [-pi, pi) from `seed`, or zeros.
std::vector<double> initial_parameters(int n_params, InitMode mode, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Variational imaginary time evolution
// ---------------------------------------------------------------------------

struct QiteConfig {
  double tau = 10.0;
  int n_steps = 500;
  /// Hamiltonian scale; the engine evolves under h / d.
  double d = 1.0;
  double ridge = 1e-8;
  std::uint64_t seed = 0;
  InitMode init = InitMode::kRandomUniform;
  /// Overrides `init` when set.
  std::optional<std::vector<double>> initial_theta;
  /// Ground energy of the unscaled h, used for the trace approximation ratio.
  std::optional<double> reference_min_energy;

  double delta_tau() const { return tau / n_steps; }
  void validate() const;
};

/// Linear system M theta_dot = V of the McLachlan principle, with
/// M_ij = Re<d_i psi|d_j psi>, V_i = -Re<d_i psi|H|psi> and E = <psi|H|psi>.
struct MvSystem {
  Eigen::MatrixXd M;
  Eigen::VectorXd V;
  double energy = 0.0;
};

MvSystem compute_mv(const ParamCircuit& circuit, std::span<const double> theta, const IsingHamiltonian& h);

/// Solves (M + ridge I) x = V; falls back to a truncated-SVD least-squares
/// solution (relative cutoff 1e-8) if the symmetric solve is not finite.
Eigen::VectorXd solve_update(const MvSystem& sys, double ridge);

/// theta + theta_dot * delta_tau.
std::vector<double> euler_step(std::span<const double> theta, std::span<const double> theta_dot, double delta_tau);

struct QiteStep {
  int step = 0;
  double tau = 0.0;
  std::vector<double> theta;
  double energy = 0.0;        // unscaled (times d)
  double approx_ratio = 0.0;  // energy / reference_min_energy, NaN without reference
  double best_energy = 0.0;
};

struct QiteResult {
  std::vector<double> final_theta;
  std::vector<double> best_theta;
  double best_energy = 0.0;
  double final_energy = 0.0;
  std::vector<QiteStep> trace;  // n_steps + 1 records on success
  bool ok = true;
  std::string diagnostic;
};

QiteResult run_varqite(const AnsatzSpec& ansatz, const IsingHamiltonian& h, const QiteConfig& cfg);

/// Reusable M/V evaluator for one circuit and Hamiltonian. Uses real
/// arithmetic when the circuit is real.
class MvEvaluator {
 public:
  MvEvaluator(const ParamCircuit& circuit, const IsingHamiltonian& h);

  MvSystem evaluate(std::span<const double> theta);
  bool real_path() const { return real_; }

 private:
  template <class T>
  MvSystem evaluate_impl(std::span<const double> theta, std::vector<T>& psi,
                         Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& derivs);

  ParamCircuit circuit_;
  std::vector<double> diag_;
  bool real_;
  std::vector<double> psi_real_;
  std::vector<Complex> psi_complex_;
  Eigen::MatrixXd derivs_real_;
  Eigen::MatrixXcd derivs_complex_;
};

// ---------------------------------------------------------------------------
// Variational eigensolver baseline
// ---------------------------------------------------------------------------

struct VqeConfig {
  int maxiter = 15000;
  int maxfev = 15000;
  double ftol = 2.22e-15;
  double gtol = 1e-5;
  int memory = 10;
  std::uint64_t seed = 0;
  InitMode init = InitMode::kRandomUniform;
  std::optional<std::vector<double>> initial_theta;

  void validate() const;
};

struct VqeResult {
  std::vector<double> theta;
  double energy = 0.0;
  double initial_energy = 0.0;
  int iterations = 0;
  int evaluations = 0;
  std::vector<double> energy_trace;  // energy after each iteration, starting with the initial one
  bool converged = false;
  bool ok = true;
  std::string diagnostic;
};

/// E(theta) = <psi(theta)|H|psi(theta)> and its exact gradient
/// dE/dtheta_k = 2 Re<d_k psi|H|psi>, by one adjoint sweep.
double energy_and_gradient(const ParamCircuit& circuit, std::span<const double> theta,
                           std::span<const double> diagonal, std::span<double> gradient);

/// Minimizes E(theta) with L-BFGS and a strong-Wolfe line search.
VqeResult run_vqe(const AnsatzSpec& ansatz, const IsingHamiltonian& h, const VqeConfig& cfg);

}  // namespace mkpqite
