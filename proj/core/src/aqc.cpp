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

#include "protonpipe/aqc.hpp"

#include <bit>
#include <cmath>
#include <random>

#include "protonpipe/errors.hpp"
#include "protonpipe/kak.hpp"

namespace protonpipe {

AqcConfig AqcConfig::preset(const std::string& name, CouplingMap map,
                            unsigned seed) {
  AqcConfig cfg;
  cfg.coupling = std::move(map);
  cfg.seed = seed;
  if (name == "high") {
    cfg.fidelity_target = 0.99;
  } else if (name == "low") {
    cfg.fidelity_target = 0.97;
  } else {
    throw ValidationError("unknown AQC preset `" + name + "` (use high|low)");
  }
  return cfg;
}

namespace {

constexpr Complex kI{0.0, 1.0};

// One parameterized rotation exp(-i (scale*param)/2 * G).
struct Rotation {
  PauliString generator;
  double scale;

  Rotation(PauliString g, double s) : generator(std::move(g)), scale(s) {}
};

PauliString one_qubit_string(std::size_t n, std::size_t q, char letter) {
  PauliString p(n);
  p.set_letter(q, letter);
  return p;
}

PauliString two_qubit_string(std::size_t n, std::size_t a, std::size_t b,
                             char letter) {
  PauliString p(n);
  p.set_letter(a, letter);
  p.set_letter(b, letter);
  return p;
}

// Application-ordered rotations of one block; angles map 1:1 to parameters.
std::vector<Rotation> block_rotations(const AqcBlock& b, std::size_t n) {
  std::vector<Rotation> rots;
  rots.reserve(15);
  rots.emplace_back(one_qubit_string(n, b.q_lo, 'Z'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_lo, 'Y'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_lo, 'Z'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_hi, 'Z'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_hi, 'Y'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_hi, 'Z'), 1.0);
  rots.emplace_back(two_qubit_string(n, b.q_lo, b.q_hi, 'X'), -2.0);
  rots.emplace_back(two_qubit_string(n, b.q_lo, b.q_hi, 'Y'), -2.0);
  rots.emplace_back(two_qubit_string(n, b.q_lo, b.q_hi, 'Z'), -2.0);
  rots.emplace_back(one_qubit_string(n, b.q_lo, 'Z'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_lo, 'Y'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_lo, 'Z'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_hi, 'Z'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_hi, 'Y'), 1.0);
  rots.emplace_back(one_qubit_string(n, b.q_hi, 'Z'), 1.0);
  return rots;
}

// exp(-i theta/2 P) applied in place.
void apply_rotation(Eigen::VectorXcd& amps, const PauliString& p, double theta) {
  if (theta == 0.0) return;
  const Complex c = std::cos(theta / 2.0);
  const Complex mis = -kI * std::sin(theta / 2.0);
  const std::uint64_t mask = p.flip_mask();
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  if (mask == 0) {
    for (std::uint64_t j = 0; j < dim; ++j) {
      amps(j) = (c + mis * p.basis_coefficient(j)) * amps(j);
    }
    return;
  }
  for (std::uint64_t j = 0; j < dim; ++j) {
    if (j > (j ^ mask)) continue;
    const std::uint64_t k = j ^ mask;
    const Complex aj = amps(j);
    const Complex ak = amps(k);
    amps(j) = c * aj + mis * p.basis_coefficient(k) * ak;
    amps(k) = c * ak + mis * p.basis_coefficient(j) * aj;
  }
}

struct FlatAnsatz {
  std::vector<Rotation> rotations;

  Eigen::VectorXcd prepare(const Eigen::VectorXd& params,
                           Eigen::Index dim) const {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    for (std::size_t j = 0; j < rotations.size(); ++j) {
      apply_rotation(psi, rotations[j].generator,
                     rotations[j].scale * params(j));
    }
    return psi;
  }

  // C(params) and its gradient over [active_begin, active_end).
  double cost(const Eigen::VectorXd& params, const Eigen::VectorXcd& target,
              Eigen::VectorXd* grad, std::size_t active_begin,
              std::size_t active_end) const {
    Eigen::VectorXcd psi = prepare(params, target.size());
    const Complex overlap = target.dot(psi);
    const double cost_value = 1.0 - std::norm(overlap);
    if (!grad) return cost_value;

    grad->setZero();
    Eigen::VectorXcd phi = target;
    // Reverse sweep: at step j, psi = R_j..R_1|0>, phi = R_{j+1}^+..R_m^+ t.
    for (std::size_t j = rotations.size(); j-- > 0;) {
      if (j >= active_begin && j < active_end) {
        const auto& rot = rotations[j];
        // ds/dtheta_j = <phi| (-i scale/2) G |psi>.
        const Eigen::VectorXcd g_psi = rot.generator.apply(psi);
        const Complex ds = phi.dot(g_psi) * Complex{0.0, -rot.scale / 2.0};
        (*grad)(j - active_begin) = -2.0 * (std::conj(overlap) * ds).real();
      }
      const double theta = rotations[j].scale * params(j);
      apply_rotation(psi, rotations[j].generator, -theta);
      apply_rotation(phi, rotations[j].generator, -theta);
      if (j == active_begin) break;
    }
    return cost_value;
  }
};

FlatAnsatz flatten(const std::vector<AqcBlock>& blocks, std::size_t n) {
  FlatAnsatz ansatz;
  ansatz.rotations.reserve(15 * blocks.size());
  for (const auto& b : blocks) {
    auto rots = block_rotations(b, n);
    ansatz.rotations.insert(ansatz.rotations.end(), rots.begin(), rots.end());
  }
  return ansatz;
}

Eigen::VectorXd gather_params(const std::vector<AqcBlock>& blocks) {
  Eigen::VectorXd params(15 * blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int k = 0; k < 15; ++k) params(15 * b + k) = blocks[b].angles[k];
  }
  return params;
}

void scatter_params(const Eigen::VectorXd& params,
                    std::vector<AqcBlock>& blocks) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int k = 0; k < 15; ++k) blocks[b].angles[k] = params(15 * b + k);
  }
}

// Optimizes the parameter window [begin, end) of the flattened ansatz.
double optimize_window(std::vector<AqcBlock>& blocks,
                       const Eigen::VectorXcd& target, std::size_t begin,
                       std::size_t end, const MinimizeOptions& options,
                       std::size_t n_qubits) {
  const FlatAnsatz ansatz = flatten(blocks, n_qubits);
  Eigen::VectorXd params = gather_params(blocks);
  Eigen::VectorXd window = params.segment(begin, end - begin);
  const MinimizeResult r = minimize_bfgs(
      [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
        Eigen::VectorXd full = params;
        full.segment(begin, end - begin) = x;
        return ansatz.cost(full, target, g, begin, end);
      },
      window, options);
  params.segment(begin, end - begin) = r.x;
  scatter_params(params, blocks);
  return r.value;
}

// Best single-block update on (q_lo, q_hi): cross matrix SVD.
struct ProbeResult {
  double achievable_fidelity = 0.0;
  Eigen::Matrix4cd optimal_unitary;
};

ProbeResult probe_pair(const Eigen::VectorXcd& current,
                       const Eigen::VectorXcd& target, std::size_t q_lo,
                       std::size_t q_hi) {
  const std::uint64_t dim = static_cast<std::uint64_t>(current.size());
  const std::uint64_t b_lo = std::uint64_t{1} << q_lo;
  const std::uint64_t b_hi = std::uint64_t{1} << q_hi;
  Eigen::Matrix4cd cross = Eigen::Matrix4cd::Zero();
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & (b_lo | b_hi)) continue;
    Eigen::Vector4cd psi_block{current(base), current(base | b_lo),
                               current(base | b_hi),
                               current(base | b_lo | b_hi)};
    Eigen::Vector4cd t_block{target(base), target(base | b_lo),
                             target(base | b_hi), target(base | b_lo | b_hi)};
    cross += psi_block * t_block.adjoint();
  }
  // max_U |Tr(U B)| over U(4) equals the nuclear norm, at U = V W^+.
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProbeResult out;
  const double nuclear = svd.singularValues().sum();
  out.achievable_fidelity = nuclear * nuclear;
  out.optimal_unitary = svd.matrixV() * svd.matrixU().adjoint();
  return out;
}

// 15 block angles realizing a given 4x4 unitary (up to global phase).
std::array<double, 15> angles_from_unitary(const Eigen::Matrix4cd& u) {
  const KakDecomposition kak = kak_decompose(u);
  std::array<double, 15> a{};
  const auto pre_lo = euler_zyz(kak.k2_lo);
  const auto pre_hi = euler_zyz(kak.k2_hi);
  const auto post_lo = euler_zyz(kak.k1_lo);
  const auto post_hi = euler_zyz(kak.k1_hi);
  // u1 = RZ(alpha) RY(beta) RZ(gamma): gamma is applied first.
  a[0] = pre_lo[2];
  a[1] = pre_lo[1];
  a[2] = pre_lo[0];
  a[3] = pre_hi[2];
  a[4] = pre_hi[1];
  a[5] = pre_hi[0];
  a[6] = kak.x;
  a[7] = kak.y;
  a[8] = kak.z;
  a[9] = post_lo[2];
  a[10] = post_lo[1];
  a[11] = post_lo[0];
  a[12] = post_hi[2];
  a[13] = post_hi[1];
  a[14] = post_hi[0];
  return a;
}

}  // namespace

Eigen::Matrix4cd block_unitary(const AqcBlock& block) {
  AqcBlock local = block;
  local.q_lo = 0;
  local.q_hi = 1;
  const FlatAnsatz ansatz = flatten({local}, 2);
  Eigen::Matrix4cd u;
  for (int col = 0; col < 4; ++col) {
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(4);
    basis(col) = 1.0;
    for (std::size_t j = 0; j < ansatz.rotations.size(); ++j) {
      apply_rotation(basis, ansatz.rotations[j].generator,
                     ansatz.rotations[j].scale * local.angles[j]);
    }
    u.col(col) = basis;
  }
  return u;
}

std::pair<std::size_t, std::size_t> select_pair(const StateVector& current,
                                                const StateVector& target,
                                                const CouplingMap& map,
                                                double* score,
                                                bool* zero_score) {
  if (map.edges().empty()) throw ValidationError("coupling map has no edges");
  const double base_fidelity =
      std::norm(target.amplitudes().dot(current.amplitudes()));
  std::pair<std::size_t, std::size_t> best_pair = *map.edges().begin();
  double best_score = -1.0;
  for (const auto& edge : map.edges()) {
    const ProbeResult probe = probe_pair(current.amplitudes(),
                                         target.amplitudes(), edge.first,
                                         edge.second);
    const double gain = probe.achievable_fidelity - base_fidelity;
    if (gain > best_score + 1e-15) {
      best_score = gain;
      best_pair = edge;
    }
  }
  if (score) *score = best_score;
  if (zero_score) *zero_score = best_score < 1e-12;
  return best_pair;
}

double optimize_blocks(std::vector<AqcBlock>& blocks, const StateVector& target,
                       const MinimizeOptions& options) {
  if (blocks.empty()) throw ValidationError("no blocks to optimize");
  return optimize_window(blocks, target.amplitudes(), 0, 15 * blocks.size(),
                         options, target.n_qubits());
}

AqcResult compile(const StateVector& target, const AqcConfig& config) {
  if (config.fidelity_target <= 0.0 || config.fidelity_target > 1.0) {
    throw ValidationError("fidelity target must lie in (0, 1]");
  }
  const std::size_t n = target.n_qubits();
  if (config.coupling.n_qubits() < n) {
    throw ValidationError("coupling map does not cover the register");
  }
  CouplingMap active(n);
  for (const auto& [a, b] : config.coupling.edges()) {
    if (a < n && b < n) active.add_edge(a, b);
  }
  if (active.edges().empty() && n > 1) {
    throw ValidationError("coupling map has no edges inside the register");
  }

  AqcResult result;
  std::vector<AqcBlock>& blocks = result.blocks;
  const double cost_target = 1.0 - config.fidelity_target;

  auto current_state = [&]() {
    const FlatAnsatz ansatz = flatten(blocks, n);
    return StateVector::from_amplitudes(
        ansatz.prepare(gather_params(blocks), Eigen::Index{1} << n), 1e-8);
  };
  auto current_cost = [&]() {
    return 1.0 - fidelity(target, current_state());
  };

  double cost = current_cost();
  std::size_t since_improvement = 0;

  // Dead start: when the prepared state has exactly zero overlap with the
  // target, the global cost is stationary and no single-block probe can
  // gain. Bootstrap by preparing the target's dominant basis state with
  // X-type blocks on coupled pairs, then resume the greedy growth.
  auto bootstrap_dead_start = [&]() {
    Eigen::Index dominant = 0;
    target.amplitudes().cwiseAbs().maxCoeff(&dominant);
    std::uint64_t remaining = static_cast<std::uint64_t>(dominant);
    while (remaining != 0 && blocks.size() < config.block_budget) {
      const std::size_t q = static_cast<std::size_t>(
          std::countr_zero(remaining));
      std::pair<std::size_t, std::size_t> edge{0, 0};
      bool found = false;
      for (const auto& e : active.edges()) {
        if (e.first == q || e.second == q) {
          edge = e;
          found = true;
          break;
        }
      }
      if (!found) throw RoutingError("no coupled pair covers qubit " + std::to_string(q));
      const std::size_t lo = edge.first, hi = edge.second;
      Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
      Eigen::Matrix2cd x;
      x << 0, 1, 1, 0;
      Eigen::Matrix2cd flip_lo = Eigen::Matrix2cd::Identity();
      Eigen::Matrix2cd flip_hi = Eigen::Matrix2cd::Identity();
      if (remaining & (std::uint64_t{1} << lo)) flip_lo = x;
      if (remaining & (std::uint64_t{1} << hi)) flip_hi = x;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          u.block<2, 2>(2 * i, 2 * j) = flip_hi(i, j) * flip_lo;
      AqcBlock block;
      block.q_lo = lo;
      block.q_hi = hi;
      block.angles = angles_from_unitary(u);
      blocks.push_back(block);
      result.chosen_pairs.push_back({lo, hi});
      remaining &= ~(std::uint64_t{1} << lo);
      remaining &= ~(std::uint64_t{1} << hi);
    }
    cost = optimize_window(blocks, target.amplitudes(), 0, 15 * blocks.size(),
                           config.optimizer, n);
    result.cost_history.push_back(cost);
  };

  while (cost > cost_target && blocks.size() < config.block_budget) {
    const StateVector psi = current_state();
    double probe_score = 0.0;
    bool zero = false;
    const auto pair = select_pair(psi, target, active, &probe_score, &zero);
    if (zero && 1.0 - cost < 1e-12) {
      bootstrap_dead_start();
      continue;
    }

    AqcBlock block;
    block.q_lo = std::min(pair.first, pair.second);
    block.q_hi = std::max(pair.first, pair.second);
    blocks.push_back(block);  // identity-initialized
    result.chosen_pairs.push_back({block.q_lo, block.q_hi});

    // Newest-block optimization: descend from identity, then compare against
    // the closed-form single-block optimum and keep the better.
    const std::size_t begin = 15 * (blocks.size() - 1);
    const std::size_t end = 15 * blocks.size();
    double new_cost =
        optimize_window(blocks, target.amplitudes(), begin, end,
                        config.optimizer, n);
    {
      std::vector<AqcBlock> candidate = blocks;
      const ProbeResult probe = probe_pair(psi.amplitudes(),
                                           target.amplitudes(), block.q_lo,
                                           block.q_hi);
      candidate.back().angles = angles_from_unitary(probe.optimal_unitary);
      const double seeded = optimize_window(candidate, target.amplitudes(),
                                            begin, end, config.optimizer, n);
      if (seeded < new_cost) {
        blocks = std::move(candidate);
        new_cost = seeded;
      }
    }
    if (config.full_reopt_period > 0 &&
        blocks.size() % config.full_reopt_period == 0) {
      new_cost = optimize_window(blocks, target.amplitudes(), 0,
                                 15 * blocks.size(), config.optimizer, n);
    }
    if (new_cost >= cost - 1e-12 && new_cost > cost_target) {
      // Greedy plateau: full re-optimization, then seeded perturbation
      // restarts (accepted only when they improve, so the history stays
      // monotone).
      new_cost = std::min(
          new_cost, optimize_window(blocks, target.amplitudes(), 0,
                                    15 * blocks.size(), config.optimizer, n));
      std::mt19937 rng(config.seed + 7919u * static_cast<unsigned>(blocks.size()));
      std::normal_distribution<double> noise(0.0, 0.2);
      for (int attempt = 0; attempt < 4 && new_cost >= cost - 1e-12; ++attempt) {
        std::vector<AqcBlock> perturbed = blocks;
        for (auto& b : perturbed)
          for (auto& a : b.angles) a += noise(rng);
        const double retry =
            optimize_window(perturbed, target.amplitudes(), 0,
                            15 * perturbed.size(), config.optimizer, n);
        if (retry < new_cost) {
          blocks = std::move(perturbed);
          new_cost = retry;
        }
      }
    }
    since_improvement = (new_cost < cost - 1e-12) ? 0 : since_improvement + 1;
    cost = new_cost;
    result.cost_history.push_back(cost);
    if (since_improvement >= 3) break;  // genuine plateau
  }

  if (cost > cost_target && !blocks.empty()) {
    // Final full re-optimization before conceding.
    cost = optimize_window(blocks, target.amplitudes(), 0, 15 * blocks.size(),
                           config.optimizer, n);
    if (!result.cost_history.empty() && cost < result.cost_history.back()) {
      result.cost_history.push_back(cost);
    }
  }

  result.final_cost = cost;
  result.converged = cost <= cost_target;
  result.achieved_fidelity = fidelity(target, current_state());

  result.circuit = Circuit(n);
  for (const auto& b : blocks) {
    result.circuit.unitary(b.q_lo, b.q_hi, block_unitary(b));
  }
  return result;
}

}  // namespace protonpipe
