// Copyright 2026 The protonpipe developers
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "protonpipe/errors.hpp"
#include "protonpipe/noise.hpp"
#include "protonpipe/statevector.hpp"
#include "support/oracles.hpp"

using namespace protonpipe;
using oracles::max_abs_diff;

namespace {

// Independent channel oracle: explicit Kraus operators for relaxation and
// the uniform-Pauli form of depolarizing, applied with dense matrices.
Eigen::MatrixXcd oracle_relaxation(const Eigen::MatrixXcd& rho,
                                   std::size_t qubit, std::size_t n, double e1,
                                   double e2) {
  const Eigen::Matrix2cd identity2 = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero();
  k0(0, 0) = 1.0;
  k0(1, 1) = e2;
  Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
  k1(0, 1) = std::sqrt(1.0 - e1);
  Eigen::Matrix2cd k2 = Eigen::Matrix2cd::Zero();
  k2(1, 1) = std::sqrt(std::max(0.0, e1 - e2 * e2));
  auto lift = [&](const Eigen::Matrix2cd& k) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = n; q-- > 0;) {
      full = oracles::kron(full, q == qubit ? Eigen::MatrixXcd(k)
                                            : Eigen::MatrixXcd(identity2));
    }
    return full;
  };
  const Eigen::MatrixXcd K0 = lift(k0), K1 = lift(k1), K2 = lift(k2);
  return K0 * rho * K0.adjoint() + K1 * rho * K1.adjoint() +
         K2 * rho * K2.adjoint();
}

Eigen::MatrixXcd oracle_depolarizing(const Eigen::MatrixXcd& rho,
                                     std::size_t qubit, std::size_t n,
                                     double lambda) {
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (char letter : {'I', 'X', 'Y', 'Z'}) {
    std::string letters(n, 'I');
    letters[qubit] = letter;
    const Eigen::MatrixXcd p = oracles::dense_pauli_string(letters);
    mixed += p * rho * p.adjoint();
  }
  return (1.0 - lambda) * rho + (lambda / 4.0) * mixed;
}

}  // namespace

TEST_CASE("ideal model reproduces statevector results") {
  Circuit c(3);
  c.h(0).cx(0, 1).rz(2, 0.7).cz(1, 2);
  const NoiseModel nm = NoiseModel::ideal(3);
  CHECK(nm.is_ideal());
  PauliSum obs(3);
  obs.add_term("ZZI", 0.8);
  obs.add_term("XIX", -0.3);
  const double noisy = noisy_expectation(c, obs, nm);
  const double exact = expectation(run(c, StateVector(3)), obs);
  CHECK(noisy == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("depolarizing closed form: X then Z measurement") {
  // Channel parameter p on one qubit corresponds to calibrated average
  // error p/2 at zero duration.
  const double p = 0.12;
  NoiseModel nm = NoiseModel::ideal(1);
  nm.set_gate_default("x", GateNoise{p / 2.0, 0.0});
  Circuit c(1);
  c.x(0);
  const Gate& gate = c.gates()[0];
  CHECK(derived_depolarizing(nm, gate) == doctest::Approx(p).epsilon(1e-12));
  const double z = noisy_expectation(c, PauliSum::single_letter(1, 0, 'Z'), nm);
  CHECK(z == doctest::Approx(-(1.0 - p)).epsilon(1e-12));

  // Dense superoperator oracle.
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.0;
  const Eigen::MatrixXcd x = oracles::dense_pauli_string("X");
  rho = x * rho * x.adjoint();
  rho = oracle_depolarizing(rho, 0, 1, p);
  const Eigen::MatrixXcd zmat = oracles::dense_pauli_string("Z");
  CHECK(std::abs((rho * zmat).trace().real() - z) < 1e-12);
}

TEST_CASE("readout-only noise on |0> measures 1 - 2*p01") {
  NoiseModel nm = NoiseModel::ideal(1);
  QubitNoise q;
  q.readout_p01 = 0.07;
  q.readout_p10 = 0.21;
  nm.set_qubit(0, q);
  const double z =
      noisy_expectation(Circuit(1), PauliSum::single_letter(1, 0, 'Z'), nm);
  CHECK(z == doctest::Approx(1.0 - 2.0 * 0.07).epsilon(1e-12));
}

TEST_CASE("thermal relaxation matches the Kraus oracle") {
  NoiseModel nm = NoiseModel::ideal(2);
  QubitNoise q;
  q.t1 = 80e-6;
  q.t2 = 120e-6;
  nm.set_qubit(0, q);
  nm.set_qubit(1, q);
  nm.set_gate_default("cz", GateNoise{0.0, 500e-9});  // pure relaxation

  Circuit c(2);
  c.h(0).h(1).cz(0, 1);
  const DensityOperator rho = noisy_evolve(c, nm);

  // Oracle: exact gates densely, then per-qubit relaxation Kraus.
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(0, 0) = 1.0;
  const Eigen::MatrixXcd u = c.to_unitary();
  expected = u * expected * u.adjoint();
  const double e1 = std::exp(-500e-9 / 80e-6);
  const double e2 = std::exp(-500e-9 / 120e-6);
  expected = oracle_relaxation(expected, 0, 2, e1, e2);
  expected = oracle_relaxation(expected, 1, 2, e1, e2);
  CHECK(max_abs_diff(rho.matrix(), expected) < 1e-12);
}

TEST_CASE("combined channel calibration matches the requested gate error") {
  // derived_depolarizing solves for the depolarizing share; composing both
  // channels must reproduce the calibrated average gate infidelity.
  NoiseModel nm = NoiseModel::ideal(1);
  QubitNoise q;
  q.t1 = 100e-6;
  q.t2 = 150e-6;
  nm.set_qubit(0, q);
  const double target_error = 2e-3;
  nm.set_gate_default("sx", GateNoise{target_error, 100e-9});
  Circuit c(1);
  c.sx(0);
  const double lambda = derived_depolarizing(nm, c.gates()[0]);
  CHECK(lambda > 0.0);

  // Average gate fidelity via the process fidelity of the composed noise,
  // computed densely from the channel action on a basis of matrices.
  const double e1 = std::exp(-100e-9 / 100e-6);
  const double e2 = std::exp(-100e-9 / 150e-6);
  Complex fpro_sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Eigen::MatrixXcd eij = Eigen::MatrixXcd::Zero(2, 2);
      eij(i, j) = 1.0;
      Eigen::MatrixXcd out = oracle_depolarizing(eij, 0, 1, lambda);
      out = oracle_relaxation(out, 0, 1, e1, e2);
      fpro_sum += out(i, j);
    }
  }
  const double fpro = fpro_sum.real() / 4.0;
  const double favg = (2.0 * fpro + 1.0) / 3.0;
  CHECK(1.0 - favg == doctest::Approx(target_error).epsilon(1e-9));
}

TEST_CASE("relaxation overwhelming the calibrated error clamps to zero") {
  NoiseModel nm = NoiseModel::ideal(1);
  QubitNoise q;
  q.t1 = 1e-6;  // very lossy
  q.t2 = 1e-6;
  nm.set_qubit(0, q);
  nm.set_gate_default("sx", GateNoise{1e-5, 500e-9});
  Circuit c(1);
  c.sx(0);
  bool clamped = false;
  CHECK(derived_depolarizing(nm, c.gates()[0], &clamped) == 0.0);
  CHECK(clamped);
}

TEST_CASE("calibration JSON parsing and validation") {
  SUBCASE("well-formed file") {
    const std::string text = R"({
      "qubits": [
        {"t1_us": 300.0, "t2_us": 250.0, "readout_p01": 0.01, "readout_p10": 0.02},
        {"t1_us": 280.0, "t2_us": 200.0, "readout_p01": 0.015, "readout_p10": 0.022}
      ],
      "gates": [
        {"kind": "sx", "qubits": [0], "error": 0.000214, "duration_ns": 32},
        {"kind": "cz", "qubits": [0, 1], "error": 0.003108, "duration_ns": 68},
        {"kind": "rz", "error": 0.0, "duration_ns": 0}
      ],
      "eplg18": 0.003108,
      "timestamp": "2024-11-10T10:40:31Z"
    })";
    const NoiseModel nm = NoiseModel::from_json(text);
    CHECK(nm.n_qubits() == 2);
    CHECK(nm.eplg18() == doctest::Approx(0.003108));
    CHECK(nm.qubit(0).t1 == doctest::Approx(300e-6));
    Circuit c(2);
    c.cz(0, 1);
    CHECK(nm.gate_noise(c.gates()[0]).error == doctest::Approx(0.003108));
    // Reversed edge resolves to the same entry.
    Circuit c2(2);
    c2.cz(1, 0);
    CHECK(nm.gate_noise(c2.gates()[0]).error == doctest::Approx(0.003108));
  }
  SUBCASE("derived two-qubit parameter at zero duration is 4r/3") {
    NoiseModel nm = NoiseModel::ideal(2);
    nm.set_gate_default("cz", GateNoise{0.003108, 0.0});
    Circuit c(2);
    c.cz(0, 1);
    CHECK(derived_depolarizing(nm, c.gates()[0]) ==
          doctest::Approx(4.0 * 0.003108 / 3.0).epsilon(1e-12));
  }
  SUBCASE("T2 > 2*T1 is rejected with the qubit named") {
    const std::string text = R"({
      "qubits": [{"t1_us": 100.0, "t2_us": 300.0}]
    })";
    CHECK_THROWS_WITH_AS(NoiseModel::from_json(text),
                         doctest::Contains("qubit 0"), ValidationError);
  }
  SUBCASE("rates outside [0,1] are rejected") {
    const std::string text = R"({
      "qubits": [{"readout_p01": 1.5}]
    })";
    CHECK_THROWS_AS(NoiseModel::from_json(text), ValidationError);
  }
  SUBCASE("missing per-edge entries are reported") {
    const std::string text = R"({
      "qubits": [{}, {}, {}],
      "gates": [{"kind": "cz", "qubits": [0, 1], "error": 0.001}]
    })";
    const NoiseModel nm = NoiseModel::from_json(text);
    std::set<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {1, 2}};
    const auto missing = nm.missing_edges(edges, "cz");
    REQUIRE(missing.size() == 1);
    CHECK(missing[0] == std::pair<std::size_t, std::size_t>{1, 2});
  }
}

TEST_CASE("shot mode converges to the exact mode") {
  NoiseModel nm = NoiseModel::ideal(2);
  QubitNoise q;
  q.readout_p01 = 0.02;
  q.readout_p10 = 0.03;
  nm.set_qubit(0, q);
  nm.set_qubit(1, q);
  Circuit c(2);
  c.h(0).cx(0, 1);
  PauliSum h(2);
  h.add_term("ZZ", 1.0);
  h.add_term("XX", 0.5);
  h.add_term("ZI", -0.25);
  const double exact = noisy_expectation(c, h, nm);
  const double sampled = noisy_expectation_sampled(c, h, nm, 200000, 11);
  CHECK(std::abs(sampled - exact) < 0.02);
  CHECK_THROWS_AS(noisy_expectation_sampled(c, h, nm, 0, 1), ValidationError);
}

TEST_CASE("density-matrix register limit") {
  const NoiseModel nm = NoiseModel::ideal(12);
  CHECK_THROWS_AS(noisy_evolve(Circuit(12), nm, 10), ResourceError);
}
