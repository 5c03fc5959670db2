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

#include <benchmark/benchmark.h>

#include <random>

#include "protonpipe/adapt.hpp"
#include "protonpipe/hamiltonian.hpp"
#include "protonpipe/kak.hpp"
#include "protonpipe/noise.hpp"
#include "protonpipe/statevector.hpp"

using namespace protonpipe;

namespace {

PauliSum random_sum(std::size_t n_qubits, std::size_t n_terms, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> letter(0, 3);
  std::normal_distribution<double> coeff(0.0, 1.0);
  const char alphabet[] = "IXYZ";
  PauliSum s(n_qubits);
  for (std::size_t t = 0; t < n_terms; ++t) {
    std::string l(n_qubits, 'I');
    for (auto& c : l) c = alphabet[letter(rng)];
    s.add_term(l, coeff(rng));
  }
  return s;
}

Circuit layered_circuit(std::size_t n_qubits, std::size_t layers) {
  Circuit c(n_qubits);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < n_qubits; ++q) c.ry(q, 0.1 * (l + q + 1));
    for (std::size_t q = l % 2; q + 1 < n_qubits; q += 2) c.cz(q, q + 1);
  }
  return c;
}

void BM_PauliMultiply(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const PauliSum a = random_sum(n, 24, 1);
  const PauliSum b = random_sum(n, 24, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_PauliMultiply)->Arg(4)->Arg(8)->Arg(12);

void BM_AssembleToy(benchmark::State& state) {
  NeoIntegrals ints = NeoIntegrals::zero(ModeLayout{4, 2});
  std::mt19937 rng(3);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int p = 0; p < 4; ++p) ints.h1e(p, p) = -1.0 + 0.3 * p;
  for (int p = 0; p < 2; ++p) ints.v1p(p, p) = -0.5 + 0.4 * p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(ints));
  }
}
BENCHMARK(BM_AssembleToy);

void BM_StatevectorRun(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Circuit c = layered_circuit(n, 8);
  const StateVector psi(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(c, psi));
  }
}
BENCHMARK(BM_StatevectorRun)->Arg(6)->Arg(10)->Arg(12);

void BM_Expectation(benchmark::State& state) {
  const std::size_t n = state.range(0);
  PauliSum h(n);
  const PauliSum raw = random_sum(n, 60, 5);
  for (const auto& [l, c] : raw.terms()) h.add_term(l, c.real());
  const StateVector psi = run(layered_circuit(n, 4), StateVector(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation(psi, h));
  }
}
BENCHMARK(BM_Expectation)->Arg(8)->Arg(10);

void BM_KakSynthesis(benchmark::State& state) {
  std::mt19937 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex{g(rng), g(rng)};
  const Eigen::Matrix4cd u =
      Eigen::HouseholderQR<Eigen::Matrix4cd>(a).householderQ();
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_qubit_block_circuit(u, 0, 1, 2));
  }
}
BENCHMARK(BM_KakSynthesis);

void BM_NoisyExpectation(benchmark::State& state) {
  const std::size_t n = state.range(0);
  NoiseModel nm = NoiseModel::ideal(n);
  nm.set_gate_default("cz", GateNoise{3e-3, 68e-9});
  QubitNoise q;
  q.t1 = 300e-6;
  q.t2 = 250e-6;
  q.readout_p01 = 0.01;
  q.readout_p10 = 0.015;
  for (std::size_t k = 0; k < n; ++k) nm.set_qubit(k, q);
  const Circuit c = layered_circuit(n, 6);
  PauliSum h(n);
  h.add_term(std::string(n, 'Z'), 1.0);
  h.add_term("X" + std::string(n - 1, 'I'), 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(noisy_expectation(c, h, nm));
  }
}
BENCHMARK(BM_NoisyExpectation)->Arg(4)->Arg(6)->Arg(8);

void BM_AdaptIteration(benchmark::State& state) {
  NeoIntegrals ints = NeoIntegrals::zero(ModeLayout{2, 2});
  ints.h1e << -1.1, 0.08, 0.08, -0.4;
  ints.v1p << -0.6, 0.05, 0.05, -0.1;
  const PauliSum h = assemble(ints);
  const auto pool = make_fermionic_pool(ints.layout, {0}, {0});
  const StateVector ref = reference_state(ints.layout, {0}, {0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient_screen(h, ref, pool));
  }
}
BENCHMARK(BM_AdaptIteration);

}  // namespace

BENCHMARK_MAIN();
