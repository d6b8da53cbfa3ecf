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

#include "mkpqite/engines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mkpqite {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

template <class T>
std::vector<T> initial_amplitudes(int n_qubits, InitialState init) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<T> psi;
  if (init == InitialState::kAllZero) {
    psi.assign(dim, T{0.0});
    psi[0] = T{1.0};
  } else {
    psi.assign(dim, T{1.0 / std::sqrt(static_cast<double>(dim))});
  }
  return psi;
}

inline double re_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double re_dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

inline double abs2(double a) { return a * a; }
inline double abs2(const Complex& a) { return std::norm(a); }

template <class T>
double energy_and_gradient_impl(const ParamCircuit& circuit, std::span<const double> theta,
                                std::span<const double> diag, std::span<double> grad) {
  std::vector<T> phi = initial_amplitudes<T>(circuit.n_qubits, circuit.initial_state);
  auto angle = [&](const GateSpec& g) { return g.param_slot ? theta[static_cast<std::size_t>(*g.param_slot)] : 0.0; };
  for (const auto& g : circuit.gates) apply_gate(std::span<T>(phi), g, angle(g));

  std::vector<T> lambda(phi.size());
  double energy = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    lambda[i] = diag[i] * phi[i];
    energy += abs2(phi[i]) * diag[i];
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<T> mu(phi.size());
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    const GateSpec& g = *it;
    if (g.param_slot) {
      mu = phi;
      apply_generator(std::span<T>(mu), g);
      grad[static_cast<std::size_t>(*g.param_slot)] = 2.0 * re_dot(mu, lambda);
    }
    apply_gate_adjoint(std::span<T>(phi), g, angle(g));
    apply_gate_adjoint(std::span<T>(lambda), g, angle(g));
  }
  return energy;
}

}  // namespace

std::vector<double> initial_parameters(int n_params, InitMode mode, std::uint64_t seed) {
  std::vector<double> theta(static_cast<std::size_t>(n_params), 0.0);
  if (mode == InitMode::kRandomUniform) {
    Rng rng(seed);
    for (auto& t : theta) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return theta;
}

void QiteConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("QiteConfig: tau must be positive");
  if (n_steps < 1) throw std::invalid_argument("QiteConfig: n_steps must be >= 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("QiteConfig: d must be positive");
  if (!(ridge >= 0.0)) throw std::invalid_argument("QiteConfig: ridge must be >= 0");
}

MvEvaluator::MvEvaluator(const ParamCircuit& circuit, const IsingHamiltonian& h)
    : circuit_(circuit), diag_(h.diagonal()), real_(circuit.is_real()) {
  circuit_.validate();
  if (h.n_qubits != circuit.n_qubits)
    throw std::invalid_argument("MvEvaluator: circuit and Hamiltonian qubit counts differ");
  const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
  if (real_)
    derivs_real_ = Eigen::MatrixXd::Zero(dim, circuit.n_params);
  else
    derivs_complex_ = Eigen::MatrixXcd::Zero(dim, circuit.n_params);
}

MvSystem MvEvaluator::evaluate(std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(circuit_.n_params))
    throw std::invalid_argument("compute_mv: parameter vector length mismatch");
  if (real_) return evaluate_impl(theta, psi_real_, derivs_real_);
  return evaluate_impl(theta, psi_complex_, derivs_complex_);
}

template <class T>
MvSystem MvEvaluator::evaluate_impl(std::span<const double> theta, std::vector<T>& psi,
                                    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& derivs) {
  psi = initial_amplitudes<T>(circuit_.n_qubits, circuit_.initial_state);
  const auto dim = static_cast<std::size_t>(psi.size());
  auto column = [&](int k) { return std::span<T>(derivs.col(k).data(), dim); };

  std::vector<int> live;
  live.reserve(static_cast<std::size_t>(circuit_.n_params));
  for (const auto& g : circuit_.gates) {
    const double angle = g.param_slot ? theta[static_cast<std::size_t>(*g.param_slot)] : 0.0;
    apply_gate(std::span<T>(psi), g, angle);
    for (int k : live) apply_gate(column(k), g, angle);
    if (g.param_slot) {
      const int k = *g.param_slot;
      std::copy(psi.begin(), psi.end(), derivs.col(k).data());
      apply_generator(column(k), g);
      live.push_back(k);
    }
  }

  Eigen::Matrix<T, Eigen::Dynamic, 1> hpsi(static_cast<Eigen::Index>(dim));
  MvSystem sys;
  for (std::size_t i = 0; i < dim; ++i) {
    hpsi(static_cast<Eigen::Index>(i)) = diag_[i] * psi[i];
    sys.energy += abs2(psi[i]) * diag_[i];
  }
  if constexpr (std::is_same_v<T, double>) {
    sys.M.noalias() = derivs.transpose() * derivs;
    sys.V.noalias() = -(derivs.transpose() * hpsi);
  } else {
    sys.M = (derivs.adjoint() * derivs).real();
    sys.V = -(derivs.adjoint() * hpsi).real();
  }
  // Symmetrize away GEMM rounding.
  sys.M = 0.5 * (sys.M + sys.M.transpose()).eval();
  return sys;
}

MvSystem compute_mv(const ParamCircuit& circuit, std::span<const double> theta, const IsingHamiltonian& h) {
  MvEvaluator ev(circuit, h);
  return ev.evaluate(theta);
}

Eigen::VectorXd solve_update(const MvSystem& sys, double ridge) {
  const auto p = sys.M.rows();
  if (sys.M.cols() != p || sys.V.size() != p) throw std::invalid_argument("solve_update: M must be square and conform to V");
  if (!sys.M.allFinite() || !sys.V.allFinite() || !std::isfinite(ridge))
    throw std::invalid_argument("solve_update: non-finite input");
  if (p == 0) return Eigen::VectorXd();

  Eigen::MatrixXd a = sys.M;
  a.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd x = ldlt.solve(sys.V);
    if (x.allFinite()) return x;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-8);
  return svd.solve(sys.V);
}

std::vector<double> euler_step(std::span<const double> theta, std::span<const double> theta_dot, double delta_tau) {
  if (theta.size() != theta_dot.size()) throw std::invalid_argument("euler_step: length mismatch");
  std::vector<double> out(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) out[k] = theta[k] + theta_dot[k] * delta_tau;
  return out;
}

QiteResult run_varqite(const AnsatzSpec& ansatz, const IsingHamiltonian& h, const QiteConfig& cfg) {
  cfg.validate();
  const ParamCircuit& circuit = ansatz.circuit;
  if (circuit.n_qubits != h.n_qubits) throw std::invalid_argument("run_varqite: ansatz and Hamiltonian qubit counts differ");

  const IsingHamiltonian scaled = rescale(h, cfg.d);
  MvEvaluator evaluator(circuit, scaled);
  const double dt = cfg.delta_tau();

  std::vector<double> theta = cfg.initial_theta ? *cfg.initial_theta : initial_parameters(circuit.n_params, cfg.init, cfg.seed);
  if (theta.size() != static_cast<std::size_t>(circuit.n_params))
    throw std::invalid_argument("run_varqite: initial parameter vector length mismatch");

  QiteResult result;
  result.best_energy = std::numeric_limits<double>::infinity();
  result.trace.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int step = 0; step <= cfg.n_steps; ++step) {
    MvSystem sys = evaluator.evaluate(theta);
    const double energy = sys.energy * cfg.d;
    if (!std::isfinite(energy)) {
      result.ok = false;
      result.diagnostic = "non-finite energy at step " + std::to_string(step);
      break;
    }
    if (energy < result.best_energy) {
      result.best_energy = energy;
      result.best_theta = theta;
    }
    QiteStep rec;
    rec.step = step;
    rec.tau = step * dt;
    rec.theta = theta;
    rec.energy = energy;
    rec.approx_ratio = (cfg.reference_min_energy && *cfg.reference_min_energy != 0.0)
                           ? energy / *cfg.reference_min_energy
                           : nan;
    rec.best_energy = result.best_energy;
    result.trace.push_back(std::move(rec));
    result.final_theta = theta;
    result.final_energy = energy;
    if (step == cfg.n_steps) break;

    if (!sys.M.allFinite() || !sys.V.allFinite()) {
      result.ok = false;
      result.diagnostic = "non-finite M/V at step " + std::to_string(step);
      break;
    }
    const Eigen::VectorXd theta_dot = solve_update(sys, cfg.ridge);
    theta = euler_step(theta, std::span<const double>(theta_dot.data(), static_cast<std::size_t>(theta_dot.size())), dt);
    if (!all_finite(theta)) {
      result.ok = false;
      result.diagnostic = "non-finite parameters after step " + std::to_string(step);
      break;
    }
  }
  if (result.best_theta.empty()) result.best_theta = theta;
  return result;
}

// ---------------------------------------------------------------------------

void VqeConfig::validate() const {
  if (maxiter < 1 || maxfev < 1 || memory < 1) throw std::invalid_argument("VqeConfig: limits must be positive");
  if (!(ftol > 0.0) || !(gtol > 0.0)) throw std::invalid_argument("VqeConfig: tolerances must be positive");
}

double energy_and_gradient(const ParamCircuit& circuit, std::span<const double> theta,
                           std::span<const double> diagonal, std::span<double> gradient) {
  if (theta.size() != static_cast<std::size_t>(circuit.n_params) || gradient.size() != theta.size())
    throw std::invalid_argument("energy_and_gradient: parameter/gradient length mismatch");
  if (diagonal.size() != (std::size_t{1} << circuit.n_qubits))
    throw std::invalid_argument("energy_and_gradient: Hamiltonian dimension mismatch");
  if (circuit.is_real()) return energy_and_gradient_impl<double>(circuit, theta, diagonal, gradient);
  return energy_and_gradient_impl<Complex>(circuit, theta, diagonal, gradient);
}

namespace {

class Objective {
 public:
  Objective(const ParamCircuit& c, std::vector<double> diag, int maxfev)
      : circuit_(c), diag_(std::move(diag)), maxfev_(maxfev) {}

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    ++evaluations_;
    g.resize(x.size());
    return energy_and_gradient(circuit_, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), diag_,
                               std::span<double>(g.data(), static_cast<std::size_t>(g.size())));
  }
  int evaluations() const { return evaluations_; }
  bool exhausted() const { return evaluations_ >= maxfev_; }

 private:
  const ParamCircuit& circuit_;
  std::vector<double> diag_;
  int maxfev_;
  int evaluations_ = 0;
};

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  double f = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

// Strong-Wolfe line search (bracketing + zoom with safeguarded quadratic
// interpolation).
LineSearchResult wolfe_search(Objective& fn, const Eigen::VectorXd& x0, double f0, const Eigen::VectorXd& g0,
                              const Eigen::VectorXd& dir, double alpha0) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  constexpr int kMaxBracket = 30, kMaxZoom = 40;
  const double dphi0 = g0.dot(dir);

  struct Point {
    double a, f, dphi;
    Eigen::VectorXd x, g;
  };
  auto eval = [&](double a) {
    Point p;
    p.a = a;
    p.x = x0 + a * dir;
    p.f = fn(p.x, p.g);
    p.dphi = p.g.dot(dir);
    return p;
  };
  auto accept = [](Point& p) {
    LineSearchResult r;
    r.ok = true;
    r.alpha = p.a;
    r.f = p.f;
    r.x = std::move(p.x);
    r.g = std::move(p.g);
    return r;
  };

  auto zoom = [&](Point lo, Point hi) -> LineSearchResult {
    for (int it = 0; it < kMaxZoom && !fn.exhausted(); ++it) {
      const double width = hi.a - lo.a;
      const double denom = 2.0 * (hi.f - lo.f - lo.dphi * width);
      double a = (denom > 0.0) ? lo.a - lo.dphi * width * width / denom : lo.a + 0.5 * width;
      const double lo_b = std::min(lo.a, hi.a), hi_b = std::max(lo.a, hi.a);
      const double margin = 0.1 * (hi_b - lo_b);
      if (!std::isfinite(a) || a < lo_b + margin || a > hi_b - margin) a = lo.a + 0.5 * width;
      Point p = eval(a);
      if (!std::isfinite(p.f)) return {};
      if (p.f > f0 + c1 * p.a * dphi0 || p.f >= lo.f) {
        hi = std::move(p);
      } else {
        if (std::abs(p.dphi) <= -c2 * dphi0) return accept(p);
        if (p.dphi * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = std::move(p);
      }
      if (std::abs(hi.a - lo.a) < 1e-16 * std::max(1.0, std::abs(lo.a))) break;
    }
    // Fall back to the best sufficient-decrease point found.
    if (lo.a > 0.0 && lo.f < f0) return accept(lo);
    return {};
  };

  Point prev{0.0, f0, dphi0, x0, g0};
  double a = alpha0;
  for (int i = 0; i < kMaxBracket && !fn.exhausted(); ++i) {
    Point cur = eval(a);
    if (!std::isfinite(cur.f)) {
      a = 0.5 * (prev.a + a);
      continue;
    }
    if (cur.f > f0 + c1 * a * dphi0 || (i > 0 && cur.f >= prev.f)) return zoom(std::move(prev), std::move(cur));
    if (std::abs(cur.dphi) <= -c2 * dphi0) return accept(cur);
    if (cur.dphi >= 0.0) return zoom(std::move(cur), std::move(prev));
    prev = std::move(cur);
    a *= 2.0;
  }
  if (prev.a > 0.0) return accept(prev);
  return {};
}

}  // namespace

VqeResult run_vqe(const AnsatzSpec& ansatz, const IsingHamiltonian& h, const VqeConfig& cfg) {
  cfg.validate();
  const ParamCircuit& circuit = ansatz.circuit;
  circuit.validate();
  if (circuit.n_qubits != h.n_qubits) throw std::invalid_argument("run_vqe: ansatz and Hamiltonian qubit counts differ");

  std::vector<double> init = cfg.initial_theta ? *cfg.initial_theta : initial_parameters(circuit.n_params, cfg.init, cfg.seed);
  if (init.size() != static_cast<std::size_t>(circuit.n_params))
    throw std::invalid_argument("run_vqe: initial parameter vector length mismatch");

  Objective fn(circuit, h.diagonal(), cfg.maxfev);
  const Eigen::Index p = circuit.n_params;
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(init.data(), p);
  Eigen::VectorXd g;
  double f = fn(x, g);

  VqeResult res;
  res.initial_energy = f;
  res.energy_trace.push_back(f);
  auto finish = [&]() {
    res.theta.assign(x.data(), x.data() + p);
    res.energy = f;
    res.evaluations = fn.evaluations();
    return res;
  };
  if (!std::isfinite(f)) {
    res.ok = false;
    res.diagnostic = "non-finite initial energy";
    return finish();
  }
  if (p == 0 || g.lpNorm<Eigen::Infinity>() <= cfg.gtol) {
    res.converged = true;
    return finish();
  }

  std::vector<Eigen::VectorXd> s_hist, y_hist;
  std::vector<double> rho_hist;
  for (int iter = 1; iter <= cfg.maxiter; ++iter) {
    // Two-loop recursion for d = -H g.
    Eigen::VectorXd q = g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t i = m; i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (m > 0) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -q;
    if (g.dot(dir) >= 0.0) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
    }
    const double alpha0 = s_hist.empty() ? std::min(1.0, 1.0 / dir.norm()) : 1.0;

    LineSearchResult ls = wolfe_search(fn, x, f, g, dir, alpha0);
    if (!ls.ok) {
      res.diagnostic = "line search made no progress";
      res.iterations = iter - 1;
      return finish();
    }
    Eigen::VectorXd s = ls.x - x;
    Eigen::VectorXd y = ls.g - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * y.squaredNorm()) {
      if (static_cast<int>(s_hist.size()) == cfg.memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
    }
    const double rel = (f - ls.f) / std::max({std::abs(f), std::abs(ls.f), 1.0});
    x = std::move(ls.x);
    g = std::move(ls.g);
    f = ls.f;
    res.energy_trace.push_back(f);
    res.iterations = iter;
    if (rel <= cfg.ftol || g.lpNorm<Eigen::Infinity>() <= cfg.gtol) {
      res.converged = true;
      return finish();
    }
    if (fn.exhausted()) {
      res.diagnostic = "maxfev reached";
      return finish();
    }
  }
  res.diagnostic = "maxiter reached";
  return finish();
}

}  // namespace mkpqite
