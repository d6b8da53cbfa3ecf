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

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "gtest/gtest.h"

namespace mkpqite {
namespace {

using Mat = Eigen::MatrixXcd;
constexpr Complex kI{0.0, 1.0};

Mat pauli(char p) {
  Mat m = Mat::Zero(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -kI, kI, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

// Full 2^n matrix of a Pauli string; `ops[k]` acts on qubit k (bit k).
Mat pauli_string(const std::string& ops) {
  Mat m = Mat::Identity(1, 1);
  for (char c : ops) m = Eigen::kroneckerProduct(pauli(c), m).eval();
  return m;
}

Mat rotation(const std::string& ops, double theta) {
  const Mat g = pauli_string(ops);
  return std::cos(theta / 2) * Mat::Identity(g.rows(), g.cols()) - kI * std::sin(theta / 2) * g;
}

// Oracle for the full-register matrix of one gate, from Pauli algebra only.
Mat oracle_gate(int n, const GateSpec& g, double theta) {
  auto ops = [&](char a, char b) {
    std::string s(static_cast<size_t>(n), 'I');
    s[static_cast<size_t>(g.targets[0])] = a;
    if (b) s[static_cast<size_t>(g.targets[1])] = b;
    return s;
  };
  const Mat id = Mat::Identity(1 << n, 1 << n);
  switch (g.kind) {
    case GateKind::kH: return (pauli_string(ops('X', 0)) + pauli_string(ops('Z', 0))) / std::sqrt(2.0);
    case GateKind::kX: return pauli_string(ops('X', 0));
    case GateKind::kSqrtX: return 0.5 * ((1.0 + kI) * id + (1.0 - kI) * pauli_string(ops('X', 0)));
    case GateKind::kCX: {
      const Mat zc = pauli_string(ops('Z', 0)), xt = pauli_string(ops('I', 'X')), zx = pauli_string(ops('Z', 'X'));
      return 0.5 * (id + zc + xt - zx);
    }
    case GateKind::kRX: return rotation(ops('X', 0), theta);
    case GateKind::kRY: return rotation(ops('Y', 0), theta);
    case GateKind::kRZ: return rotation(ops('Z', 0), theta);
    case GateKind::kRZZ: return rotation(ops('Z', 'Z'), theta);
    case GateKind::kRZY: return rotation(ops('Z', 'Y'), theta);
    case GateKind::kRYZ: return rotation(ops('Y', 'Z'), theta);
  }
  return id;
}

Eigen::VectorXcd random_state(Rng& rng, int n) {
  Eigen::VectorXcd v(1 << n);
  for (auto& a : v) a = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return v / v.norm();
}

std::vector<Complex> to_vec(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXcd to_eigen(const std::vector<Complex>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const std::vector<GateKind> kAllKinds = {GateKind::kH,  GateKind::kX,  GateKind::kSqrtX, GateKind::kCX,  GateKind::kRX,
                                         GateKind::kRY, GateKind::kRZ, GateKind::kRZZ,   GateKind::kRZY, GateKind::kRYZ};

ParamCircuit random_circuit(Rng& rng, int n, int n_params, bool real_only) {
  ParamCircuit c;
  c.n_qubits = n;
  c.initial_state = rng.uniform() < 0.5 ? InitialState::kAllZero : InitialState::kUniform;
  int slot = 0;
  while (slot < n_params) {
    GateKind k = kAllKinds[static_cast<size_t>(rng.uniform_int(0, 9))];
    if (real_only && !is_real_gate(k)) continue;
    if (n == 1 && gate_arity(k) == 2) continue;
    GateSpec g{k, {-1, -1}, std::nullopt};
    g.targets[0] = static_cast<int>(rng.uniform_int(0, n - 1));
    if (gate_arity(k) == 2) {
      do g.targets[1] = static_cast<int>(rng.uniform_int(0, n - 1));
      while (g.targets[1] == g.targets[0]);
    }
    if (is_parameterized(k)) g.param_slot = slot++;
    c.gates.push_back(g);
  }
  c.n_params = n_params;
  return c;
}

std::vector<double> random_theta(Rng& rng, int n) {
  std::vector<double> t(static_cast<size_t>(n));
  for (double& x : t) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return t;
}

TEST(GateTest, LocalMatricesMatchPauliAlgebra) {
  Rng rng(1);
  for (GateKind k : kAllKinds) {
    const double theta = rng.uniform(-3, 3);
    GateSpec g{k, {0, gate_arity(k) == 2 ? 1 : -1}, std::nullopt};
    const int n = gate_arity(k);
    EXPECT_LT((gate_matrix(k, theta) - oracle_gate(n, g, theta)).norm(), 1e-12) << gate_name(k);
  }
}

TEST(GateTest, Unitary) {
  Rng rng(2);
  for (GateKind k : kAllKinds) {
    for (int rep = 0; rep < 5; ++rep) {
      const Mat u = gate_matrix(k, rng.uniform(-6, 6));
      EXPECT_LT((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm(), 1e-10) << gate_name(k);
    }
  }
}

TEST(GateTest, RzyFromRzzConjugation) {
  Rng rng(3);
  const Mat sx_j = Eigen::kroneckerProduct(gate_matrix(GateKind::kSqrtX), pauli('I')).eval();
  for (int rep = 0; rep < 10; ++rep) {
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Mat rzz = gate_matrix(GateKind::kRZZ, theta);
    const Mat rzy = gate_matrix(GateKind::kRZY, theta);
    // SX^dagger Z SX = Y, so conjugating RZZ on qubit j gives RZY.
    const Mat conj = sx_j.adjoint() * rzz * sx_j;
    EXPECT_LT((conj - rzy).norm(), 1e-10);
  }
}

// SX_j RZZ SX_j taken literally is X_j RZY, which is not a phase away.
TEST(GateTest, LiteralSandwichIsNotRzy) {
  const Mat sx_j = Eigen::kroneckerProduct(gate_matrix(GateKind::kSqrtX), pauli('I')).eval();
  const Mat x_j = Eigen::kroneckerProduct(pauli('X'), pauli('I')).eval();
  const double theta = 0.7;
  const Mat lit = sx_j * gate_matrix(GateKind::kRZZ, theta) * sx_j;
  const Mat rzy = gate_matrix(GateKind::kRZY, theta);
  const Complex phase = (rzy.adjoint() * lit).trace() / 4.0;
  EXPECT_GT((lit - phase * rzy).norm(), 0.5);
  EXPECT_LT((lit - x_j * rzy).norm(), 1e-10);
}

TEST(ApplyTest, MatchesOracleOnRandomStates) {
  Rng rng(4);
  const int n = 4;
  for (GateKind k : kAllKinds) {
    for (int rep = 0; rep < 4; ++rep) {
      GateSpec g{k, {static_cast<int>(rng.uniform_int(0, n - 1)), -1}, std::nullopt};
      if (gate_arity(k) == 2) {
        do g.targets[1] = static_cast<int>(rng.uniform_int(0, n - 1));
        while (g.targets[1] == g.targets[0]);
      }
      const double theta = rng.uniform(-3, 3);
      const Eigen::VectorXcd psi = random_state(rng, n);
      const Eigen::VectorXcd want = oracle_gate(n, g, theta) * psi;
      std::vector<Complex> got = to_vec(psi);
      apply_gate(std::span<Complex>(got), g, theta);
      EXPECT_LT((to_eigen(got) - want).norm(), 1e-12) << gate_name(k);
      apply_gate_adjoint(std::span<Complex>(got), g, theta);
      EXPECT_LT((to_eigen(got) - psi).norm(), 1e-12) << gate_name(k);
      if (is_real_gate(k)) {
        Eigen::VectorXd re = psi.real();
        std::vector<double> r(re.data(), re.data() + re.size());
        apply_gate(std::span<double>(r), g, theta);
        const Eigen::VectorXcd want_re = oracle_gate(n, g, theta) * re.cast<Complex>();
        for (int z = 0; z < (1 << n); ++z) EXPECT_NEAR(r[static_cast<size_t>(z)], want_re[z].real(), 1e-12);
      }
    }
  }
}

TEST(ApplyTest, ComplexGatesRejectRealSpans) {
  std::vector<double> r(4, 0.5);
  EXPECT_THROW(apply_gate(std::span<double>(r), GateSpec{GateKind::kRX, {0, -1}, 0}, 0.3), std::logic_error);
}

TEST(RunTest, EmptyCircuitIsZeroState) {
  ParamCircuit c;
  c.n_qubits = 3;
  const StateVector s = run(c, {});
  EXPECT_EQ(s.amplitudes[0], Complex(1.0, 0.0));
  for (size_t z = 1; z < 8; ++z) EXPECT_EQ(s.amplitudes[z], Complex(0.0, 0.0));
}

TEST(RunTest, ZeroAngleRzyIsIdentity) {
  ParamCircuit c;
  c.n_qubits = 2;
  c.initial_state = InitialState::kUniform;
  c.gates = {GateSpec{GateKind::kRZY, {0, 1}, 0}};
  c.n_params = 1;
  const std::vector<double> zero{0.0};
  const StateVector s = run(c, zero);
  for (const Complex& a : s.amplitudes) EXPECT_NEAR(std::abs(a - 0.5), 0.0, 1e-15);
}

TEST(RunTest, NormPreservedAndMatchesOracle) {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep % 5;
    const ParamCircuit c = random_circuit(rng, n, 8, false);
    const std::vector<double> theta = random_theta(rng, c.n_params);
    const StateVector s = run(c, theta);
    EXPECT_NEAR(s.norm(), 1.0, 1e-10);
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(1 << n);
    if (c.initial_state == InitialState::kAllZero) want[0] = 1.0;
    else want.setConstant(1.0 / std::sqrt(double(1 << n)));
    for (const GateSpec& g : c.gates) want = oracle_gate(n, g, g.param_slot ? theta[size_t(*g.param_slot)] : 0.0) * want;
    EXPECT_LT((to_eigen(s.amplitudes) - want).norm(), 1e-10);
  }
}

TEST(RunTest, RejectsBadInput) {
  ParamCircuit c;
  c.n_qubits = 2;
  c.gates = {GateSpec{GateKind::kRY, {0, -1}, 0}};
  c.n_params = 1;
  EXPECT_THROW(run(c, std::vector<double>{}), std::invalid_argument);
  c.gates[0].targets[0] = 2;
  EXPECT_THROW(run(c, std::vector<double>{0.1}), std::invalid_argument);
  c.gates = {GateSpec{GateKind::kRY, {0, -1}, 0}, GateSpec{GateKind::kRY, {1, -1}, 0}};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ExpectationTest, Examples) {
  IsingHamiltonian z(1);
  z.fields = {1.0};
  StateVector one{1, {0.0, 1.0}};
  EXPECT_DOUBLE_EQ(expectation(one, z), -1.0);

  IsingHamiltonian zz(3);
  zz.couplings[{0, 1}] = 2.5;
  zz.couplings[{1, 2}] = -1.0;
  zz.offset = 0.75;
  EXPECT_NEAR(expectation(StateVector::initial(3, InitialState::kUniform), zz), 0.75, 1e-15);
}

TEST(ExpectationTest, MatchesDenseOracle) {
  Rng rng(6);
  IsingHamiltonian h(3);
  h.fields = {0.3, -1.2, 0.8};
  h.couplings[{0, 1}] = 1.5;
  h.couplings[{0, 2}] = -0.4;
  h.couplings[{1, 2}] = 2.0;
  h.offset = -0.6;
  Mat dense = h.offset * Mat::Identity(8, 8);
  dense += 0.3 * pauli_string("ZII") - 1.2 * pauli_string("IZI") + 0.8 * pauli_string("IIZ");
  dense += 1.5 * pauli_string("ZZI") - 0.4 * pauli_string("ZIZ") + 2.0 * pauli_string("IZZ");
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXcd psi = random_state(rng, 3);
    const double want = psi.dot(dense * psi).real();
    const StateVector s{3, to_vec(psi)};
    EXPECT_NEAR(expectation(s, h), want, 1e-10);
    const std::vector<double> diag = h.diagonal();
    EXPECT_NEAR(expectation(s, diag), want, 1e-10);
  }
  EXPECT_THROW(expectation(StateVector::initial(2, InitialState::kAllZero), h), std::invalid_argument);
}

TEST(DerivativeTest, NoParameters) {
  ParamCircuit c;
  c.n_qubits = 2;
  c.gates = {GateSpec{GateKind::kH, {0, -1}, std::nullopt}};
  EXPECT_TRUE(derivative_states(c, {}).empty());
}

TEST(DerivativeTest, RyAnalytic) {
  ParamCircuit c;
  c.n_qubits = 1;
  c.gates = {GateSpec{GateKind::kRY, {0, -1}, 0}};
  c.n_params = 1;
  for (double theta : {-2.0, 0.0, 0.4, 1.9}) {
    const auto d = derivative_states(c, std::vector<double>{theta});
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NEAR(std::abs(d[0][0] - Complex(-std::sin(theta / 2) / 2, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d[0][1] - Complex(std::cos(theta / 2) / 2, 0)), 0.0, 1e-15);
    EXPECT_NEAR(to_eigen(d[0]).norm(), 0.5, 1e-15);
  }
}

TEST(DerivativeTest, FiniteDifference) {
  Rng rng(7);
  const double eps = 1e-5;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep % 6;
    const ParamCircuit c = random_circuit(rng, n, 1 + static_cast<int>(rng.uniform_int(0, 11)), rep % 2 == 0);
    const std::vector<double> theta = random_theta(rng, c.n_params);
    const auto d = derivative_states(c, theta);
    ASSERT_EQ(static_cast<int>(d.size()), c.n_params);
    for (int k = 0; k < c.n_params; ++k) {
      std::vector<double> tp = theta, tm = theta;
      tp[size_t(k)] += eps;
      tm[size_t(k)] -= eps;
      const Eigen::VectorXcd fd = (to_eigen(run(c, tp).amplitudes) - to_eigen(run(c, tm).amplitudes)) / (2 * eps);
      const Eigen::VectorXcd got = to_eigen(d[size_t(k)]);
      for (Eigen::Index z = 0; z < fd.size(); ++z) EXPECT_NEAR(std::abs(got[z] - fd[z]), 0.0, 1e-6);
    }
  }
}

TEST(ArgmaxTest, Examples) {
  EXPECT_EQ(to_string(argmax_bitstring(StateVector::initial(3, InitialState::kAllZero))), "000");
  EXPECT_EQ(to_string(argmax_bitstring(StateVector{1, {0.6, 0.8}})), "1");
  EXPECT_EQ(to_string(argmax_bitstring(StateVector::initial(4, InitialState::kUniform))), "0000");
  // Qubit 0 is rendered first: basis index 0b10 has qubit 1 set.
  EXPECT_EQ(to_string(argmax_bitstring(StateVector{2, {0.0, 0.0, 1.0, 0.0}})), "01");
}

TEST(SampleTest, Examples) {
  const auto basis = sample(StateVector{2, {0.0, 1.0, 0.0, 0.0}}, 1000, 9);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis.at("10"), 1000);

  const StateVector plus = StateVector::initial(1, InitialState::kUniform);
  const auto hist = sample(plus, 100000, 42);
  EXPECT_NEAR(hist.at("0") / 1e5, 0.5, 0.01);
  EXPECT_NEAR(hist.at("1") / 1e5, 0.5, 0.01);
  EXPECT_EQ(sample(plus, 1000, 42), sample(plus, 1000, 42));
}

}  // namespace
}  // namespace mkpqite
