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
#include "protonpipe/zne.hpp"
#include "support/oracles.hpp"

using namespace protonpipe;
using oracles::phase_free_distance;

namespace {

Circuit sample_circuit(std::size_t n_qubits, std::size_t n_gates,
                       std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> pick_q(0, n_qubits - 1);
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_real_distribution<double> angle(-2.0, 2.0);
  Circuit c(n_qubits);
  for (std::size_t k = 0; k < n_gates; ++k) {
    const std::size_t a = pick_q(rng);
    std::size_t b = pick_q(rng);
    while (b == a) b = pick_q(rng);
    switch (pick(rng)) {
      case 0: c.rx(a, angle(rng)); break;
      case 1: c.rz(a, angle(rng)); break;
      case 2: c.h(a); break;
      case 3: c.cz(a, b); break;
      default: c.cx(a, b); break;
    }
  }
  return c;
}

std::size_t count_2q(const Circuit& c) { return two_qubit_metrics(c).count; }

ZneDataset linear_dataset(double a, double b, const std::vector<double>& lambdas,
                          std::size_t replicates, double sigma,
                          std::mt19937& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  ZneDataset data;
  data.lambdas = lambdas;
  for (double lambda : lambdas) {
    std::vector<double> samples(replicates);
    for (auto& s : samples) s = a + b * lambda + (sigma > 0 ? noise(rng) : 0.0);
    data.samples.push_back(std::move(samples));
  }
  return data;
}

}  // namespace

TEST_CASE("gate folding") {
  std::mt19937 rng(3);
  const Circuit c = sample_circuit(4, 14, rng);
  const std::size_t n2 = count_2q(c);
  REQUIRE(n2 >= 3);

  SUBCASE("lambda = 1 returns the circuit unchanged") {
    const Circuit f = fold(c, 1.0, 5);
    CHECK(f.size() == c.size());
  }
  SUBCASE("lambda = 3 triples every two-qubit gate") {
    const Circuit f = fold(c, 3.0, 5);
    CHECK(count_2q(f) == 3 * n2);
  }
  SUBCASE("lambda = 2 hits the rounded target count") {
    const Circuit f = fold(c, 2.0, 5);
    const long target = std::lround(2.0 * static_cast<double>(n2));
    CHECK(std::abs(static_cast<long>(count_2q(f)) - target) <= 2);
  }
  SUBCASE("the unitary is exactly preserved across scales and seeds") {
    const Eigen::MatrixXcd reference = c.to_unitary();
    for (double lambda : {1.0, 1.5, 2.0, 3.0, 4.0}) {
      for (unsigned seed = 0; seed < 4; ++seed) {
        const Circuit f = fold(c, lambda, seed);
        CHECK(phase_free_distance(f.to_unitary(), reference) < 1e-10);
      }
    }
  }
  SUBCASE("folding is deterministic under the seed") {
    CHECK(fold(c, 2.3, 9).to_text() == fold(c, 2.3, 9).to_text());
  }
  SUBCASE("lambda < 1 is rejected") {
    CHECK_THROWS_AS(fold(c, 0.5, 0), ValidationError);
  }
}

TEST_CASE("noise amplification is monotone for depolarizing-dominant models") {
  NoiseModel nm = NoiseModel::ideal(2);
  nm.set_gate_default("cz", GateNoise{0.01, 0.0});
  nm.set_gate_default("cx", GateNoise{0.01, 0.0});
  Circuit c(2);
  c.h(0).cx(0, 1).cz(0, 1).cz(0, 1);
  PauliSum h(2);
  h.add_term("ZZ", 1.0);
  const double exact = expectation(run(c, StateVector(2)), h);
  REQUIRE(std::abs(exact) > 0.1);
  double previous_error = -1.0;
  for (double lambda : {1.0, 2.0, 3.0, 4.0}) {
    const double value = noisy_expectation(fold(c, lambda, 7), h, nm);
    const double error = std::abs(value - exact);
    CHECK(error >= previous_error - 1e-12);
    previous_error = error;
  }
}

TEST_CASE("fit_extrapolate") {
  SUBCASE("exact linear data selects degree 1 and recovers the intercept") {
    std::mt19937 rng(1);
    const ZneDataset data = linear_dataset(-4.2, 0.8, {1, 2, 3, 4}, 6, 0.0, rng);
    const FitReport fit = fit_extrapolate(data, {1, 2});
    CHECK(fit.degree == 1);
    CHECK(fit.intercept == doctest::Approx(-4.2).epsilon(1e-9));
  }
  SUBCASE("planted quadratic data selects degree 2 in most trials") {
    std::size_t degree_two = 0;
    std::size_t at_least_two = 0;
    const std::size_t trials = 60;
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937 rng(100 + t);
      std::normal_distribution<double> noise(0.0, 0.01);
      ZneDataset data;
      data.lambdas = {1, 2, 3, 4};
      for (double lambda : data.lambdas) {
        std::vector<double> samples(12);
        for (auto& s : samples) {
          s = -2.0 + 0.3 * lambda + 0.12 * lambda * lambda + noise(rng);
        }
        data.samples.push_back(std::move(samples));
      }
      const FitReport fit = fit_extrapolate(data, {1, 2}, 0.25, 500 + t);
      if (fit.degree == 2) ++degree_two;
      // With degree 3 in the pool, the biased linear model must still lose.
      const FitReport wide = fit_extrapolate(data, {1, 2, 3}, 0.25, 500 + t);
      if (wide.degree >= 2) ++at_least_two;
    }
    CHECK(degree_two >= trials * 8 / 10);
    CHECK(at_least_two >= trials * 95 / 100);
  }
  SUBCASE("degrees with more parameters than scales are skipped with a note") {
    std::mt19937 rng(2);
    const ZneDataset data = linear_dataset(1.0, 0.5, {1, 2}, 4, 0.0, rng);
    const FitReport fit = fit_extrapolate(data, {1, 3});
    CHECK(fit.degree == 1);
    REQUIRE(!fit.notes.empty());
    CHECK(fit.notes[0].find("skipped") != std::string::npos);
  }
  SUBCASE("datasets without the unmitigated scale are rejected") {
    std::mt19937 rng(3);
    ZneDataset data = linear_dataset(0.0, 1.0, {2, 3}, 3, 0.0, rng);
    CHECK_THROWS_AS(fit_extrapolate(data, {1}), ValidationError);
  }
}

TEST_CASE("barrier estimators") {
  SUBCASE("identical datasets difference to zero") {
    std::mt19937 rng(5);
    const ZneDataset data = linear_dataset(-1.0, 0.4, {1, 2, 3, 4}, 5, 0.0, rng);
    const BarrierEstimate fit_first = barrier_fit_first(data, data, {1, 2});
    CHECK(std::abs(fit_first.delta_e) < 1e-9);
    const BarrierEstimate diff_first = barrier_diff_first(data, data, {1, 2});
    CHECK(std::abs(diff_first.delta_e) < 1e-12);
  }
  SUBCASE("planted intercepts 10 and 34 mHa give a 24 mHa barrier") {
    std::mt19937 rng(7);
    const ZneDataset left =
        linear_dataset(0.010, 0.002, {1, 2, 3, 4}, 24, 0.0005, rng);
    const ZneDataset middle =
        linear_dataset(0.034, 0.0025, {1, 2, 3, 4}, 24, 0.0005, rng);
    const BarrierEstimate estimate = barrier_fit_first(left, middle, {1, 2});
    CHECK(std::abs(estimate.delta_e - 0.024) < 4.0 * estimate.sigma);
    // Quadrature formula is exact.
    const double expected_sigma =
        std::sqrt(estimate.left.intercept_se * estimate.left.intercept_se +
                  estimate.middle.intercept_se * estimate.middle.intercept_se);
    CHECK(estimate.sigma == doctest::Approx(expected_sigma).epsilon(1e-12));
  }
  SUBCASE("diff-first wins under common-mode noise") {
    std::size_t diff_smaller = 0;
    const std::size_t trials = 60;
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937 rng(900 + t);
      std::normal_distribution<double> common(0.0, 0.02);
      std::normal_distribution<double> individual(0.0, 0.002);
      ZneDataset left, middle;
      left.lambdas = middle.lambdas = {1, 2, 3, 4};
      for (double lambda : left.lambdas) {
        std::vector<double> l(10), m(10);
        for (std::size_t i = 0; i < 10; ++i) {
          const double shared = common(rng);
          l[i] = -0.55 + 0.01 * lambda + shared + individual(rng);
          m[i] = -0.52 + 0.012 * lambda + shared + individual(rng);
        }
        left.samples.push_back(std::move(l));
        middle.samples.push_back(std::move(m));
      }
      const auto fit_first = barrier_fit_first(left, middle, {1, 2}, 0.25, t);
      const auto diff_first = barrier_diff_first(left, middle, {1, 2}, 0.25, t);
      if (diff_first.sigma <= fit_first.sigma) ++diff_smaller;
    }
    CHECK(diff_smaller >= trials * 8 / 10);
  }
  SUBCASE("quadratic raw energies, linear differences") {
    // A curved common noise response cancels in the pairwise differences:
    // the raw fits select degree 2 while the difference fit selects 1.
    std::size_t raw_quadratic = 0, diff_linear = 0;
    const std::size_t trials = 40;
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937 rng(1300 + t);
      std::normal_distribution<double> jitter(0.0, 0.003);
      ZneDataset left, middle;
      left.lambdas = middle.lambdas = {1, 2, 3, 4};
      for (double lambda : left.lambdas) {
        std::vector<double> l(12), m(12);
        for (std::size_t i = 0; i < 12; ++i) {
          const double curve = 0.05 * lambda * lambda;
          l[i] = -0.60 + 0.02 * lambda + curve + jitter(rng);
          m[i] = -0.58 + 0.023 * lambda + curve + jitter(rng);
        }
        left.samples.push_back(std::move(l));
        middle.samples.push_back(std::move(m));
      }
      if (fit_extrapolate(left, {1, 2}, 0.25, t).degree == 2) ++raw_quadratic;
      const ZneDataset diff = paired_difference(left, middle);
      if (fit_extrapolate(diff, {1, 2}, 0.25, t).degree == 1) ++diff_linear;
    }
    CHECK(raw_quadratic >= trials * 9 / 10);
    CHECK(diff_linear >= trials * 6 / 10);
  }
  SUBCASE("mismatched grids raise an alignment error") {
    std::mt19937 rng(11);
    const ZneDataset a = linear_dataset(0.0, 1.0, {1, 2, 3}, 4, 0.0, rng);
    const ZneDataset b = linear_dataset(0.0, 1.0, {1, 2, 4}, 4, 0.0, rng);
    CHECK_THROWS_AS(barrier_diff_first(a, b, {1}), ValidationError);
  }
}

TEST_CASE("bootstrap") {
  SUBCASE("stratified resampling preserves replicate counts exactly") {
    ZneDataset data;
    data.lambdas = {1, 2, 3};
    data.samples = {{1.0, 2.0, 3.0}, {4.0, 5.0}, {6.0, 7.0, 8.0, 9.0}};
    std::mt19937 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
      const ZneDataset replicate = resample_stratified(data, rng);
      REQUIRE(replicate.samples.size() == data.samples.size());
      for (std::size_t k = 0; k < data.samples.size(); ++k) {
        CHECK(replicate.samples[k].size() == data.samples[k].size());
        for (double v : replicate.samples[k]) {
          CHECK(std::find(data.samples[k].begin(), data.samples[k].end(), v) !=
                data.samples[k].end());
        }
      }
    }
  }
  SUBCASE("zero-variance data collapses the interval") {
    ZneDataset data;
    data.lambdas = {1, 2};
    data.samples = {{3.0, 3.0, 3.0}, {5.0, 5.0, 5.0}};
    const BootstrapInterval interval = bootstrap_intercept(data, 1, 200, 1);
    CHECK(interval.median == doctest::Approx(1.0));  // 3 = a + b, 5 = a + 2b
    CHECK(interval.p15 == interval.median);
    CHECK(interval.p85 == interval.median);
    CHECK(!interval.notes.empty());
  }
  SUBCASE("linear data matches the analytic interval within 20%") {
    std::mt19937 rng(17);
    const ZneDataset data =
        linear_dataset(2.0, -0.5, {1, 2, 3, 4}, 40, 0.05, rng);
    const FitReport fit = fit_extrapolate(data, {1});
    const BootstrapInterval interval = bootstrap_intercept(data, 1, 3000, 23);
    const double z70 = 1.036433;  // central 70% normal quantile
    const double half = z70 * fit.intercept_se;
    CHECK(std::abs(interval.median - fit.intercept) < 0.2 * half + 1e-12);
    CHECK(std::abs(interval.p15 - (fit.intercept - half)) < 0.2 * half);
    CHECK(std::abs(interval.p85 - (fit.intercept + half)) < 0.2 * half);
  }
  SUBCASE("bootstrap is deterministic under the seed") {
    std::mt19937 rng(19);
    const ZneDataset data = linear_dataset(1.0, 0.3, {1, 2, 3}, 8, 0.1, rng);
    const auto a = bootstrap_intercept(data, 1, 300, 7);
    const auto b = bootstrap_intercept(data, 1, 300, 7);
    CHECK(a.median == b.median);
    CHECK(a.p15 == b.p15);
    CHECK(a.p85 == b.p85);
  }
  SUBCASE("too few replicates are rejected") {
    ZneDataset data;
    data.lambdas = {1, 2};
    data.samples = {{1.0}, {2.0}};
    CHECK_THROWS_AS(bootstrap_intercept(data, 1, 50, 1), ValidationError);
  }
}

TEST_CASE("ZNE end-to-end on a noisy toy circuit") {
  // Depolarizing-dominant model; exact-mode replicates differ through fold
  // randomness. The extrapolated energy must beat the unmitigated one.
  NoiseModel nm = NoiseModel::ideal(3);
  nm.set_gate_default("cz", GateNoise{0.008, 0.0});
  nm.set_gate_default("cx", GateNoise{0.008, 0.0});
  std::mt19937 rng(23);
  const Circuit c = sample_circuit(3, 16, rng);
  PauliSum h(3);
  h.add_term("ZZI", 1.0);
  h.add_term("IZZ", 0.7);
  h.add_term("XIX", 0.4);
  const double exact = expectation(run(c, StateVector(3)), h);

  ZneDataset data;
  data.lambdas = {1, 2, 3, 4};
  for (double lambda : data.lambdas) {
    std::vector<double> samples;
    for (unsigned rep = 0; rep < 6; ++rep) {
      samples.push_back(noisy_expectation(fold(c, lambda, 100 + rep), h, nm));
    }
    data.samples.push_back(std::move(samples));
  }
  const double unmitigated_error = std::abs(data.samples[0][0] - exact);
  const FitReport fit = fit_extrapolate(data, {1, 2});
  const double mitigated_error = std::abs(fit.intercept - exact);
  CHECK(mitigated_error <= 0.5 * unmitigated_error);
}
