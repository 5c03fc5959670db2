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

// Acceptance suite: one pass/fail line per criterion, each pinned to its
// stated tolerance. Independent oracles live in tests/support.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "protonpipe/adapt.hpp"
#include "protonpipe/analysis.hpp"
#include "protonpipe/aqc.hpp"
#include "protonpipe/hamiltonian.hpp"
#include "protonpipe/noise.hpp"
#include "protonpipe/pipeline.hpp"
#include "protonpipe/transpile.hpp"
#include "protonpipe/zne.hpp"
#include "support/oracles.hpp"
#include "support/toy_systems.hpp"

using namespace protonpipe;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Criterion {
  const char* name;
  std::function<void()> body;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

void run_criterion(int index, const char* name, const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("[%s] criterion %2d: %-38s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL",
              index, name, seconds, detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

PauliSum random_sum(std::size_t n_qubits, std::size_t n_terms, std::mt19937& rng) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::normal_distribution<double> coeff(0.0, 1.0);
  const char alphabet[] = "IXYZ";
  PauliSum s(n_qubits);
  for (std::size_t t = 0; t < n_terms; ++t) {
    std::string l(n_qubits, 'I');
    for (auto& c : l) c = alphabet[letter(rng)];
    s.add_term(l, Complex{coeff(rng), coeff(rng)});
  }
  return s;
}

Eigen::MatrixXcd dense_oracle(const PauliSum& s) {
  const Eigen::Index dim = Eigen::Index{1} << s.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [l, c] : s.terms()) m += c * oracles::dense_pauli_string(l);
  return m;
}

Eigen::MatrixXcd fock_hamiltonian(const NeoIntegrals& ints) {
  const std::size_t nE = ints.layout.n_electron_modes;
  const std::size_t nP = ints.layout.n_proton_modes;
  const std::size_t n = ints.layout.total_modes();
  const Eigen::Index dim = Eigen::Index{1} << n;
  auto a = [&](std::size_t m) { return oracles::annihilation(n, m); };
  auto c = [&](std::size_t m) { return oracles::creation(n, m); };
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t P = 0; P < nP; ++P)
    for (std::size_t Q = 0; Q < nP; ++Q)
      h += ints.v1p(P, Q) * c(nE + P) * a(nE + Q);
  for (std::size_t P = 0; P < nP; ++P)
    for (std::size_t Q = 0; Q < nP; ++Q)
      for (std::size_t p = 0; p < nE; ++p)
        for (std::size_t q = 0; q < nE; ++q)
          h += ints.g(P, Q, p, q) * c(nE + P) * c(p) * a(q) * a(nE + Q);
  for (std::size_t p = 0; p < nE; ++p)
    for (std::size_t q = 0; q < nE; ++q) h += ints.h1e(p, q) * c(p) * a(q);
  for (std::size_t p = 0; p < nE; ++p)
    for (std::size_t q = 0; q < nE; ++q)
      for (std::size_t r = 0; r < nE; ++r)
        for (std::size_t s = 0; s < nE; ++s)
          h += 0.5 * ints.h2(p, q, r, s) * c(p) * c(q) * a(s) * a(r);
  h += ints.e_core * Eigen::MatrixXcd::Identity(dim, dim);
  return h;
}

struct ToySystem {
  NeoIntegrals ints;
  std::set<std::size_t> occ_e, occ_p;
};

std::vector<ToySystem> adapt_toys() {
  return {
      {toys::toy_neo(2, 2, 301), {0}, {0}},
      {toys::toy_neo(2, 2, 302), {0}, {0}},
      {toys::toy_neo(3, 2, 77, 0.30, 0.25), {0, 1}, {0}},
  };
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), "missing artifact " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main() {
  const auto suite_start = std::chrono::steady_clock::now();

  run_criterion(1, "operator-algebra dense oracle", [] {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(1);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + (trial % 4);
      const PauliSum a = random_sum(n, 6, rng);
      const PauliSum b = random_sum(n, 6, rng);
      require(oracles::max_abs_diff((a * b).to_dense(),
                                    dense_oracle(a) * dense_oracle(b)) < 1e-12,
              "multiply mismatch");
      const Complex scale{0.6, -0.2};
      require(oracles::max_abs_diff(add_scaled(a, scale, b).to_dense(),
                                    dense_oracle(a) + scale * dense_oracle(b)) <
                  1e-12,
              "add mismatch");
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    require(seconds < 30.0, "runtime budget exceeded");
  });

  run_criterion(2, "Jordan-Wigner vs Fock matrices", [] {
    const ModeLayout layout{4, 0};
    auto check = [&](const FermionOp& op) {
      const Eigen::MatrixXcd jw = jordan_wigner(op, layout).to_dense();
      Eigen::MatrixXcd fock = Eigen::MatrixXcd::Zero(16, 16);
      for (const auto& term : op.terms) {
        Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(16, 16);
        for (const auto& lop : term.ops) {
          prod = prod * (lop.creation ? oracles::creation(4, lop.mode)
                                      : oracles::annihilation(4, lop.mode));
        }
        fock += term.coefficient * prod;
      }
      // Matrix equality implies equal spectra.
      require(oracles::max_abs_diff(jw, fock) < 1e-11, "JW image mismatch");
    };
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t q = 0; q < 4; ++q) {
        FermionOp op;
        op.add(1.0, {{p, true}, {q, false}});
        check(op);
      }
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t s = 0; s < 4; ++s)
          for (std::size_t q = 0; q < 4; ++q) {
            FermionOp op;
            op.add(1.0, {{p, true}, {r, true}, {s, false}, {q, false}});
            check(op);
          }
  });

  run_criterion(3, "Hamiltonian assembly ground truth", [] {
    const NeoIntegrals ints = toys::toy_neo(2, 2, 7);
    const PauliSum h = assemble(ints);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fock_hamiltonian(ints));
    const GroundState gs = exact_ground_state(h);
    require(std::abs(gs.energy - es.eigenvalues()(0)) < 1e-12,
            "ground energy mismatch");
    const auto hd = h.to_dense();
    const auto ne = number_operator(ints.layout, true).to_dense();
    const auto np = number_operator(ints.layout, false).to_dense();
    require(oracles::max_abs_diff(hd * ne, ne * hd) < 1e-10, "[H, N_e] != 0");
    require(oracles::max_abs_diff(hd * np, np * hd) < 1e-10, "[H, N_p] != 0");
  });

  run_criterion(4, "LMR interpolation arithmetic", [] {
    const PauliSum hl = assemble(toys::toy_neo(2, 1, 1));
    const PauliSum hm = assemble(toys::toy_neo(2, 1, 2));
    const PauliSum hr = assemble(toys::toy_neo(2, 1, 3));
    const PauliSum h210 = interpolate(hl, hm, hr, LmrWeights::from_label("210"));
    const PauliSum manual = add_scaled(hl * Complex{2.0 / 3.0, 0.0},
                                       Complex{1.0, 0.0},
                                       hm * Complex{1.0 / 3.0, 0.0});
    require(h210.n_terms() == manual.n_terms(), "term count mismatch");
    for (const auto& [l, c] : h210.terms()) {
      require(c == manual.coefficient(l), "coefficient not bitwise equal");
    }
    const std::vector<std::string> expected{"300", "210", "120", "030",
                                            "021", "012", "003"};
    require(lmr_trajectory() == expected, "trajectory label set mismatch");
  });

  run_criterion(5, "ADAPT-VQE convergence", [] {
    for (const ToySystem& toy : adapt_toys()) {
      const auto start = std::chrono::steady_clock::now();
      const PauliSum h = assemble(toy.ints);
      const auto pool = make_fermionic_pool(toy.ints.layout, toy.occ_e, toy.occ_p);
      const StateVector ref =
          reference_state(toy.ints.layout, toy.occ_e, toy.occ_p);
      const double exact =
          exact_ground_state(h, SectorSpec{toy.ints.layout, toy.occ_e.size(),
                                           toy.occ_p.size()})
              .energy;
      AdaptOptions tight;
      tight.threshold = 1e-3;
      tight.exact_energy = exact;
      const AdaptResult deep = adapt_vqe(h, pool, ref, tight);
      require(deep.energy - exact < 1e-3, "deep threshold missed");
      for (std::size_t k = 1; k < deep.state.energy_history.size(); ++k) {
        require(deep.state.energy_history[k] <=
                    deep.state.energy_history[k - 1] + 1e-9,
                "energy history not monotone");
      }
      AdaptOptions loose = tight;
      loose.threshold = 1e-2;
      const AdaptResult shallow = adapt_vqe(h, pool, ref, loose);
      require(shallow.energy - exact < 1e-2, "shallow threshold missed");
      require(shallow.state.selected.size() <= deep.state.selected.size(),
              "looser threshold yielded a longer ansatz");
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      require(seconds < 300.0, "per-system runtime budget exceeded");
    }
  });

  run_criterion(6, "ADAPT-AQC compression", [] {
    for (const ToySystem& toy : adapt_toys()) {
      const auto start = std::chrono::steady_clock::now();
      const PauliSum h = assemble(toy.ints);
      const auto pool = make_fermionic_pool(toy.ints.layout, toy.occ_e, toy.occ_p);
      const StateVector ref =
          reference_state(toy.ints.layout, toy.occ_e, toy.occ_p);
      AdaptOptions options;
      options.threshold = 1e-2;
      options.exact_energy =
          exact_ground_state(h, SectorSpec{toy.ints.layout, toy.occ_e.size(),
                                           toy.occ_p.size()})
              .energy;
      const AdaptResult vqe = adapt_vqe(h, pool, ref, options);
      const StateVector target = run(vqe.circuit, ref);
      const std::size_t n = toy.ints.layout.total_modes();
      const CouplingMap map = line_map(n);
      const std::size_t source_depth =
          two_qubit_metrics(transpile(vqe.circuit, map).circuit).depth;
      for (const std::string preset : {"high", "low"}) {
        const double floor = preset == "high" ? 0.99 : 0.97;
        const AqcResult aqc =
            compile(target, AqcConfig::preset(preset, map, 1));
        require(aqc.achieved_fidelity >= floor,
                preset + " fidelity floor missed");
        for (std::size_t k = 1; k < aqc.cost_history.size(); ++k) {
          require(aqc.cost_history[k] <= aqc.cost_history[k - 1] + 1e-9,
                  "cost history not monotone");
        }
        const std::size_t depth =
            two_qubit_metrics(transpile(aqc.circuit, map).circuit).depth;
        require(depth * 10 <= source_depth * 6,
                preset + ": depth reduction below 40%");
      }
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      require(seconds < 600.0, "per-target runtime budget exceeded");
    }
  });

  run_criterion(7, "gate-folding identity", [] {
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::size_t> pick_q(0, 4);
    std::uniform_real_distribution<double> angle(-2.0, 2.0);
    Circuit c(5);
    for (int k = 0; k < 18; ++k) {
      const std::size_t a = pick_q(rng);
      std::size_t b = pick_q(rng);
      while (b == a) b = pick_q(rng);
      switch (k % 4) {
        case 0: c.rx(a, angle(rng)); break;
        case 1: c.cz(a, b); break;
        case 2: c.cx(a, b); break;
        default: c.h(a); break;
      }
    }
    const std::size_t n2 = two_qubit_metrics(c).count;
    const Eigen::MatrixXcd reference = c.to_unitary();
    for (double lambda : {1.0, 2.0, 3.0, 4.0}) {
      for (unsigned seed = 0; seed < 20; ++seed) {
        const Circuit folded = fold(c, lambda, seed);
        require(oracles::phase_free_distance(folded.to_unitary(), reference) <
                    1e-10,
                "folded unitary deviates");
        const long target = std::lround(lambda * static_cast<double>(n2));
        const long got = static_cast<long>(two_qubit_metrics(folded).count);
        require(std::labs(got - target) <= 2, "folded 2q count off target");
      }
    }
  });

  run_criterion(8, "ZNE recovery", [] {
    // Noisy-circuit half: one fixed noise-sensitive toy circuit; ten seeded
    // ZNE runs (fold randomness) must each at least halve the raw error.
    NoiseModel nm = NoiseModel::ideal(4);
    nm.set_gate_default("cz", GateNoise{0.008, 0.0});
    nm.set_gate_default("cx", GateNoise{0.008, 0.0});
    Circuit c(4);
    c.ry(0, 0.7).cx(0, 1).cx(1, 2).cx(2, 3).ry(1, -0.4).cz(0, 1).cz(2, 3)
        .ry(2, 0.9).cx(1, 2).cz(0, 1).cx(2, 3).ry(3, 0.5).cx(0, 1).cz(1, 2);
    PauliSum h(4);
    h.add_term("ZZII", 1.0);
    h.add_term("IZZI", 0.8);
    h.add_term("IIZZ", 0.6);
    h.add_term("XXII", 0.3);
    const double exact = expectation(run(c, StateVector(4)), h);
    for (unsigned seed = 0; seed < 10; ++seed) {
      ZneDataset data;
      data.lambdas = {1, 2, 3, 4};
      for (std::size_t li = 0; li < 4; ++li) {
        std::vector<double> samples;
        for (unsigned rep = 0; rep < 6; ++rep) {
          samples.push_back(noisy_expectation(
              fold(c, data.lambdas[li], seed * 100 + li * 10 + rep), h, nm));
        }
        data.samples.push_back(std::move(samples));
      }
      const double unmitigated = std::abs(data.samples[0][0] - exact);
      require(unmitigated > 1e-3, "toy circuit is not noise sensitive");
      const FitReport fit = fit_extrapolate(data, {1, 2}, 0.25, seed);
      require(std::abs(fit.intercept - exact) <= 0.5 * unmitigated,
              "mitigated error above half the unmitigated error");
    }
    // Synthetic planted-quadratic half.
    std::size_t hits = 0;
    for (unsigned trial = 0; trial < 200; ++trial) {
      std::mt19937 trng(3000 + trial);
      std::normal_distribution<double> noise(0.0, 0.01);
      const double a = -1.5, b = 0.25, c2 = 0.1;
      ZneDataset data;
      data.lambdas = {1, 2, 3, 4};
      for (double lambda : data.lambdas) {
        std::vector<double> samples(12);
        for (auto& s : samples)
          s = a + b * lambda + c2 * lambda * lambda + noise(trng);
        data.samples.push_back(std::move(samples));
      }
      const FitReport fit = fit_extrapolate(data, {1, 2}, 0.25, trial);
      if (fit.degree == 2 && std::abs(fit.intercept - a) <= 2.0 * fit.intercept_se) {
        ++hits;
      }
    }
    require(hits >= 180, "planted quadratic recovered in only " +
                             std::to_string(hits) + "/200 trials");
  });

  run_criterion(9, "fit-first vs diff-first uncertainty", [] {
    std::size_t diff_wins = 0;
    for (unsigned trial = 0; trial < 200; ++trial) {
      std::mt19937 rng(500 + trial);
      std::normal_distribution<double> common(0.0, 0.02);
      std::normal_distribution<double> individual(0.0, 0.002);
      ZneDataset left, middle;
      left.lambdas = middle.lambdas = {1, 2, 3, 4};
      for (double lambda : left.lambdas) {
        std::vector<double> l(10), m(10);
        for (std::size_t i = 0; i < 10; ++i) {
          const double shared = common(rng);
          l[i] = -0.55 + 0.010 * lambda + shared + individual(rng);
          m[i] = -0.53 + 0.013 * lambda + shared + individual(rng);
        }
        left.samples.push_back(std::move(l));
        middle.samples.push_back(std::move(m));
      }
      const auto fit_first = barrier_fit_first(left, middle, {1, 2}, 0.25, trial);
      const auto diff_first =
          barrier_diff_first(left, middle, {1, 2}, 0.25, trial);
      if (diff_first.sigma <= fit_first.sigma) ++diff_wins;
      const double quadrature =
          std::sqrt(fit_first.left.intercept_se * fit_first.left.intercept_se +
                    fit_first.middle.intercept_se * fit_first.middle.intercept_se);
      require(std::abs(fit_first.sigma - quadrature) < 1e-12,
              "quadrature formula not exact");
    }
    require(diff_wins >= 160, "diff-first smaller sigma in only " +
                                  std::to_string(diff_wins) + "/200 trials");
  });

  run_criterion(10, "bootstrap stratification and calibration", [] {
    ZneDataset data;
    data.lambdas = {1, 2, 3};
    data.samples = {{1.0, 2.0, 3.0}, {4.0, 5.0}, {6.0, 7.0, 8.0, 9.0}};
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const ZneDataset replicate = resample_stratified(data, rng);
      for (std::size_t k = 0; k < data.samples.size(); ++k) {
        require(replicate.samples[k].size() == data.samples[k].size(),
                "replicate counts not preserved");
      }
    }
    std::mt19937 gen(17);
    std::normal_distribution<double> noise(0.0, 0.05);
    ZneDataset linear;
    linear.lambdas = {1, 2, 3, 4};
    for (double lambda : linear.lambdas) {
      std::vector<double> samples(40);
      for (auto& s : samples) s = 2.0 - 0.5 * lambda + noise(gen);
      linear.samples.push_back(std::move(samples));
    }
    const FitReport fit = fit_extrapolate(linear, {1});
    const BootstrapInterval interval = bootstrap_intercept(linear, 1, 3000, 23);
    const double half = 1.036433 * fit.intercept_se;  // central 70% quantile
    require(std::abs(interval.median - fit.intercept) < 0.2 * half,
            "bootstrap median off");
    require(std::abs(interval.p15 - (fit.intercept - half)) < 0.2 * half,
            "bootstrap p15 off");
    require(std::abs(interval.p85 - (fit.intercept + half)) < 0.2 * half,
            "bootstrap p85 off");
  });

  run_criterion(11, "kinetics arithmetic", [] {
    const RateSensitivity s = rate_sensitivity(0.08e-3, 120.0);
    require(std::abs(s.linearized) >= 0.20 && std::abs(s.linearized) <= 0.22,
            "sensitivity outside [0.20, 0.22]");
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double delta = 1e-4 * (i + 1);
        const double t = 80.0 + 20.0 * j;
        const double value = rate_constant_ratio(delta, t);
        if (i > 0) {
          require(value < rate_constant_ratio(1e-4 * i, t),
                  "not decreasing in delta E");
        }
        if (j > 0) {
          require(value > rate_constant_ratio(delta, 80.0 + 20.0 * (j - 1)),
                  "not increasing in T");
        }
      }
    }
  });

  run_criterion(12, "density and entropy oracles", [] {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
      const StateVector psi =
          StateVector::from_amplitudes(oracles::random_state(4, rng));
      // Partial trace oracle over a random keep pair.
      std::vector<std::size_t> keep{static_cast<std::size_t>(trial % 4),
                                    static_cast<std::size_t>((trial + 1) % 4)};
      std::sort(keep.begin(), keep.end());
      const Eigen::MatrixXcd rho = reduced_density_matrix(psi, keep);
      const Eigen::MatrixXcd full =
          psi.amplitudes() * psi.amplitudes().adjoint();
      Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
      std::vector<std::size_t> rest;
      for (std::size_t q = 0; q < 4; ++q) {
        if (q != keep[0] && q != keep[1]) rest.push_back(q);
      }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int e = 0; e < 4; ++e) {
            std::uint64_t row = 0, col = 0;
            row |= (std::uint64_t(a & 1)) << keep[0];
            row |= (std::uint64_t(a >> 1)) << keep[1];
            col |= (std::uint64_t(b & 1)) << keep[0];
            col |= (std::uint64_t(b >> 1)) << keep[1];
            row |= (std::uint64_t(e & 1)) << rest[0];
            row |= (std::uint64_t(e >> 1)) << rest[1];
            col |= (std::uint64_t(e & 1)) << rest[0];
            col |= (std::uint64_t(e >> 1)) << rest[1];
            expected(a, b) += full(row, col);
          }
      require(oracles::max_abs_diff(rho, expected) < 1e-10,
              "partial trace oracle mismatch");
      // Entropy oracle.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
      double expected_entropy = 0.0;
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-14) expected_entropy -= p * std::log(p);
      }
      require(std::abs(entanglement_entropy(rho) - expected_entropy) < 1e-10,
              "entropy oracle mismatch");
    }
    // 1-RDM oracle on sector ground states.
    const NeoIntegrals ints = toys::toy_neo(2, 2, 61);
    const GroundState gs = exact_ground_state(
        assemble(ints), SectorSpec{ints.layout, 1, 1});
    const Eigen::MatrixXcd gamma = orbital_1rdm(gs.state, ints.layout, false);
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t q = 0; q < 2; ++q) {
        const Eigen::MatrixXcd op =
            oracles::creation(4, 2 + p) * oracles::annihilation(4, 2 + q);
        const Complex direct =
            gs.state.amplitudes().dot(op * gs.state.amplitudes());
        require(std::abs(gamma(p, q) - direct) < 1e-10, "1-RDM oracle mismatch");
      }
    // Grid density against the double sum at random points.
    OrbitalGrid grid;
    grid.points.resize(64, 3);
    grid.weights = Eigen::VectorXd::Constant(64, 0.2);
    grid.amplitudes.resize(64, 2);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 64; ++i) {
      grid.points.row(i) << g(rng), g(rng), g(rng);
      grid.amplitudes(i, 0) = g(rng);
      grid.amplitudes(i, 1) = g(rng);
    }
    Eigen::MatrixXcd b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = Complex{g(rng), g(rng)};
    Eigen::MatrixXcd psd = b * b.adjoint();
    psd /= psd.trace().real();
    const ProtonDensity density = proton_density(psd, grid);
    for (int i = 0; i < 64; ++i) {
      Complex direct = 0.0;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          direct += psd(p, q) * grid.amplitudes(i, p) * grid.amplitudes(i, q);
      require(std::abs(density.values(i) - direct.real()) < 1e-10,
              "grid density oracle mismatch");
      require(density.values(i) >= -1e-12, "negative density");
    }
    // Bell entropy.
    Circuit bell(2);
    bell.h(0).cx(0, 1);
    const double bell_entropy = entanglement_entropy(
        reduced_density(run(bell, StateVector(2)), {0}));
    require(std::abs(bell_entropy - std::log(2.0)) < 1e-12,
            "Bell entropy != ln 2");
  });

  run_criterion(13, "pipeline determinism", [] {
    const auto start = std::chrono::steady_clock::now();
    PipelineConfig cfg;
    cfg.left_integrals = std::string(PROTONPIPE_DATA_DIR) + "/left.neofcidump";
    cfg.middle_integrals =
        std::string(PROTONPIPE_DATA_DIR) + "/middle.neofcidump";
    cfg.right_integrals = std::string(PROTONPIPE_DATA_DIR) + "/right.neofcidump";
    cfg.occupied_electrons = {0};
    cfg.occupied_protons = {0};
    cfg.coupling_spec = "line:4";
    cfg.zne_replicates = 4;
    cfg.bootstrap_replicates = 200;
    cfg.density_grid_path = std::string(PROTONPIPE_DATA_DIR) + "/grid.csv";
    cfg.seed = 7;
    const fs::path dir_a = fs::temp_directory_path() / "protonpipe_accept_a";
    const fs::path dir_b = fs::temp_directory_path() / "protonpipe_accept_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const PipelineResult first = run_pipeline(cfg, dir_a.string());
    for (const auto& stage : first.stages) {
      require(stage.status == "ok",
              "stage " + stage.name + " " + stage.status + ": " + stage.detail);
    }
    run_pipeline(cfg, dir_b.string());
    for (const char* table :
         {"results/path_table.csv", "results/rates.csv",
          "results/zne_bootstrap.csv"}) {
      require(slurp(dir_a / table) == slurp(dir_b / table),
              std::string("table differs between runs: ") + table);
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    require(seconds < 1200.0, "pipeline runtime budget exceeded");
  });

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    suite_start)
          .count();
  std::printf("%d/13 criteria passed in %.1fs\n", 13 - failures, total);
  return failures == 0 ? 0 : 1;
}
