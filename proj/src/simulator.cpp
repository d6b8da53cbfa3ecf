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

#include "mkpqite/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace mkpqite {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class T>
constexpr bool kIsComplex = std::is_same_v<T, Complex>;

// Calls f(i0, i1) for every index pair differing only in bit q (i0 has it clear).
template <class F>
inline void for_each_pair(std::size_t dim, int q, F&& f) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < dim; base += 2 * stride)
    for (std::size_t i = base; i < base + stride; ++i) f(i, i + stride);
}

inline double sign_of_bit(std::size_t index, int q) { return ((index >> q) & 1U) ? -1.0 : 1.0; }

template <class T>
void require_complex(const GateSpec& g) {
  if constexpr (!kIsComplex<T>) {
    throw std::logic_error(std::string("gate ") + gate_name(g.kind) + " is not real; use complex amplitudes");
  }
}

// exp(-i theta Z_z (Y_y) / 2) on pairs along qubit y.
template <class T>
void apply_zy(std::span<T> a, int zq, int yq, double c, double s) {
  for_each_pair(a.size(), yq, [&](std::size_t i0, std::size_t i1) {
    const double sz = s * sign_of_bit(i0, zq);
    const T a0 = a[i0], a1 = a[i1];
    a[i0] = c * a0 - sz * a1;
    a[i1] = c * a1 + sz * a0;
  });
}

template <class T>
void apply_gate_impl(std::span<T> a, const GateSpec& g, double theta) {
  const int q0 = g.targets[0], q1 = g.targets[1];
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  switch (g.kind) {
    case GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
        const T a0 = a[i0], a1 = a[i1];
        a[i0] = r * (a0 + a1);
        a[i1] = r * (a0 - a1);
      });
      break;
    }
    case GateKind::kX:
      for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) { std::swap(a[i0], a[i1]); });
      break;
    case GateKind::kCX: {
      const std::size_t cmask = std::size_t{1} << q0;
      for_each_pair(a.size(), q1, [&](std::size_t i0, std::size_t i1) {
        if (i0 & cmask) std::swap(a[i0], a[i1]);
      });
      break;
    }
    case GateKind::kRY:
      for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
        const T a0 = a[i0], a1 = a[i1];
        a[i0] = c * a0 - s * a1;
        a[i1] = s * a0 + c * a1;
      });
      break;
    case GateKind::kRZY:
      apply_zy(a, q0, q1, c, s);
      break;
    case GateKind::kRYZ:
      apply_zy(a, q1, q0, c, s);
      break;
    case GateKind::kSqrtX:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex p{0.5, 0.5}, m{0.5, -0.5};
        for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
          const T a0 = a[i0], a1 = a[i1];
          a[i0] = p * a0 + m * a1;
          a[i1] = m * a0 + p * a1;
        });
      }
      break;
    case GateKind::kRX:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex ms = -kI * s;
        for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
          const T a0 = a[i0], a1 = a[i1];
          a[i0] = c * a0 + ms * a1;
          a[i1] = ms * a0 + c * a1;
        });
      }
      break;
    case GateKind::kRZ:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex e0{c, -s}, e1{c, s};
        for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
          a[i0] *= e0;
          a[i1] *= e1;
        });
      }
      break;
    case GateKind::kRZZ:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex same{c, -s}, diff{c, s};
        const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] *= (std::popcount(i & mask) & 1) ? diff : same;
      }
      break;
  }
}

template <class T>
void apply_generator_impl(std::span<T> a, const GateSpec& g) {
  const int q0 = g.targets[0], q1 = g.targets[1];
  switch (g.kind) {
    case GateKind::kRY:
      // -iY/2 = [[0, -1/2], [1/2, 0]]
      for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
        const T a0 = a[i0];
        a[i0] = -0.5 * a[i1];
        a[i1] = 0.5 * a0;
      });
      break;
    case GateKind::kRZY:
    case GateKind::kRYZ: {
      const int zq = g.kind == GateKind::kRZY ? q0 : q1;
      const int yq = g.kind == GateKind::kRZY ? q1 : q0;
      for_each_pair(a.size(), yq, [&](std::size_t i0, std::size_t i1) {
        const double h = 0.5 * sign_of_bit(i0, zq);
        const T a0 = a[i0];
        a[i0] = -h * a[i1];
        a[i1] = h * a0;
      });
      break;
    }
    case GateKind::kRX:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex f{0.0, -0.5};
        for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
          const T a0 = a[i0];
          a[i0] = f * a[i1];
          a[i1] = f * a0;
        });
      }
      break;
    case GateKind::kRZ:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex f{0.0, -0.5};
        for_each_pair(a.size(), q0, [&](std::size_t i0, std::size_t i1) {
          a[i0] *= f;
          a[i1] *= -f;
        });
      }
      break;
    case GateKind::kRZZ:
      require_complex<T>(g);
      if constexpr (kIsComplex<T>) {
        const Complex f{0.0, -0.5};
        const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] *= (std::popcount(i & mask) & 1) ? -f : f;
      }
      break;
    default:
      throw std::logic_error(std::string("gate ") + gate_name(g.kind) + " has no generator");
  }
}

void check_theta(const ParamCircuit& c, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(c.n_params))
    throw std::invalid_argument("parameter vector length " + std::to_string(theta.size()) +
                                " does not match circuit n_params " + std::to_string(c.n_params));
}

double angle_of(const GateSpec& g, std::span<const double> theta) {
  return g.param_slot ? theta[static_cast<std::size_t>(*g.param_slot)] : 0.0;
}

}  // namespace

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kH: return "H";
    case GateKind::kX: return "X";
    case GateKind::kSqrtX: return "SX";
    case GateKind::kCX: return "CX";
    case GateKind::kRX: return "RX";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kRZZ: return "RZZ";
    case GateKind::kRZY: return "RZY";
    case GateKind::kRYZ: return "RYZ";
  }
  return "?";
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::kCX:
    case GateKind::kRZZ:
    case GateKind::kRZY:
    case GateKind::kRYZ:
      return 2;
    default:
      return 1;
  }
}

bool is_parameterized(GateKind kind) {
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kRY:
    case GateKind::kRZ:
    case GateKind::kRZZ:
    case GateKind::kRZY:
    case GateKind::kRYZ:
      return true;
    default:
      return false;
  }
}

bool is_real_gate(GateKind kind) {
  switch (kind) {
    case GateKind::kH:
    case GateKind::kX:
    case GateKind::kCX:
    case GateKind::kRY:
    case GateKind::kRZY:
    case GateKind::kRYZ:
      return true;
    default:
      return false;
  }
}

void ParamCircuit::validate() const {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("circuit qubit count out of range");
  if (n_params < 0) throw std::invalid_argument("negative parameter count");
  std::vector<bool> used(static_cast<std::size_t>(n_params), false);
  for (const auto& g : gates) {
    const int arity = gate_arity(g.kind);
    for (int t = 0; t < arity; ++t)
      if (g.targets[t] < 0 || g.targets[t] >= n_qubits)
        throw std::invalid_argument(std::string("gate ") + gate_name(g.kind) + " target out of range");
    if (arity == 2 && g.targets[0] == g.targets[1])
      throw std::invalid_argument(std::string("gate ") + gate_name(g.kind) + " targets must differ");
    if (is_parameterized(g.kind) != g.param_slot.has_value())
      throw std::invalid_argument(std::string("gate ") + gate_name(g.kind) + " parameter slot mismatch");
    if (g.param_slot) {
      const int s = *g.param_slot;
      if (s < 0 || s >= n_params) throw std::invalid_argument("parameter slot out of range");
      if (used[s]) throw std::invalid_argument("parameter slot referenced twice");
      used[s] = true;
    }
  }
}

bool ParamCircuit::is_real() const {
  return std::all_of(gates.begin(), gates.end(), [](const GateSpec& g) { return is_real_gate(g.kind); });
}

std::string ParamCircuit::dump() const {
  std::ostringstream os;
  for (const auto& g : gates) {
    os << gate_name(g.kind) << ' ' << g.targets[0];
    if (gate_arity(g.kind) == 2) os << ',' << g.targets[1];
    os << ' ';
    if (g.param_slot)
      os << *g.param_slot;
    else
      os << '-';
    os << '\n';
  }
  return os.str();
}

StateVector StateVector::initial(int n_qubits, InitialState init) {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("qubit count out of range");
  StateVector sv;
  sv.n_qubits = n_qubits;
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (init == InitialState::kAllZero) {
    sv.amplitudes.assign(dim, Complex{0.0, 0.0});
    sv.amplitudes[0] = 1.0;
  } else {
    sv.amplitudes.assign(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
  }
  return sv;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

Eigen::MatrixXcd gate_matrix(GateKind kind, double theta) {
  const int dim = 1 << gate_arity(kind);
  Eigen::MatrixXcd u(dim, dim);
  GateSpec g{kind, {0, gate_arity(kind) == 2 ? 1 : -1}, std::nullopt};
  for (int col = 0; col < dim; ++col) {
    std::vector<Complex> e(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
    e[static_cast<std::size_t>(col)] = 1.0;
    apply_gate(std::span<Complex>(e), g, theta);
    for (int row = 0; row < dim; ++row) u(row, col) = e[static_cast<std::size_t>(row)];
  }
  return u;
}

void apply_gate(std::span<Complex> amps, const GateSpec& gate, double theta) {
  apply_gate_impl(amps, gate, theta);
}
void apply_gate(std::span<double> amps, const GateSpec& gate, double theta) {
  apply_gate_impl(amps, gate, theta);
}
void apply_gate_adjoint(std::span<Complex> amps, const GateSpec& gate, double theta) {
  if (gate.kind == GateKind::kSqrtX) {
    // SX^dagger = SX X.
    apply_gate_impl(amps, GateSpec{GateKind::kX, gate.targets, std::nullopt}, 0.0);
    apply_gate_impl(amps, gate, 0.0);
    return;
  }
  // Rotations invert by negating the angle; H, X and CX are self-inverse.
  apply_gate_impl(amps, gate, -theta);
}
void apply_gate_adjoint(std::span<double> amps, const GateSpec& gate, double theta) {
  apply_gate_impl(amps, gate, -theta);
}
void apply_generator(std::span<Complex> amps, const GateSpec& gate) { apply_generator_impl(amps, gate); }
void apply_generator(std::span<double> amps, const GateSpec& gate) { apply_generator_impl(amps, gate); }

StateVector run(const ParamCircuit& circuit, std::span<const double> theta) {
  circuit.validate();
  check_theta(circuit, theta);
  StateVector sv = StateVector::initial(circuit.n_qubits, circuit.initial_state);
  for (const auto& g : circuit.gates) apply_gate(std::span<Complex>(sv.amplitudes), g, angle_of(g, theta));
  return sv;
}

double expectation(const StateVector& state, std::span<const double> diagonal) {
  if (diagonal.size() != state.amplitudes.size())
    throw std::invalid_argument("expectation: Hamiltonian and state dimensions differ");
  double e = 0.0;
  for (std::size_t i = 0; i < diagonal.size(); ++i) e += std::norm(state.amplitudes[i]) * diagonal[i];
  return e;
}

double expectation(const StateVector& state, const IsingHamiltonian& h) {
  if (h.n_qubits != state.n_qubits) throw std::invalid_argument("expectation: qubit count mismatch");
  const auto diag = h.diagonal();
  return expectation(state, std::span<const double>(diag));
}

std::vector<std::vector<Complex>> derivative_states(const ParamCircuit& circuit,
                                                    std::span<const double> theta) {
  circuit.validate();
  check_theta(circuit, theta);
  StateVector sv = StateVector::initial(circuit.n_qubits, circuit.initial_state);
  std::vector<std::vector<Complex>> derivs(static_cast<std::size_t>(circuit.n_params));
  std::vector<int> live;  // slots already created, in creation order
  for (const auto& g : circuit.gates) {
    const double angle = angle_of(g, theta);
    apply_gate(std::span<Complex>(sv.amplitudes), g, angle);
    for (int k : live) apply_gate(std::span<Complex>(derivs[k]), g, angle);
    if (g.param_slot) {
      const int k = *g.param_slot;
      derivs[k] = sv.amplitudes;
      apply_generator(std::span<Complex>(derivs[k]), g);
      live.push_back(k);
    }
  }
  // Parameters not referenced by any gate have a zero derivative.
  for (auto& d : derivs)
    if (d.empty()) d.assign(sv.amplitudes.size(), Complex{0.0, 0.0});
  return derivs;
}

BitString argmax_bitstring(const StateVector& state) {
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  BitString bits(static_cast<std::size_t>(state.n_qubits));
  for (int k = 0; k < state.n_qubits; ++k) bits[k] = (best >> k) & 1U;
  return bits;
}

std::map<std::string, std::int64_t> sample(const StateVector& state, std::int64_t shots,
                                           std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  std::vector<double> cdf(state.amplitudes.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += std::norm(state.amplitudes[i]);
    cdf[i] = acc;
  }
  std::vector<std::int64_t> counts(cdf.size(), 0);
  Rng rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    ++counts[idx];
  }
  std::map<std::string, std::int64_t> hist;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    BitString bits(static_cast<std::size_t>(state.n_qubits));
    for (int k = 0; k < state.n_qubits; ++k) bits[k] = (i >> k) & 1U;
    hist[to_string(bits)] = counts[i];
  }
  return hist;
}

}  // namespace mkpqite
