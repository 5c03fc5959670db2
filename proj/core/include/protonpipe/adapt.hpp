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

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "protonpipe/circuit.hpp"
#include "protonpipe/fermion.hpp"
#include "protonpipe/optimize.hpp"
#include "protonpipe/statevector.hpp"

namespace protonpipe {

/// Anti-Hermitian ansatz generator tau as a canonical PauliSum whose
/// coefficients are purely imaginary; e^{theta tau} factorizes exactly into
/// per-string rotations because each generator's strings commute pairwise.
struct PoolOperator {
  std::string label;
  PauliSum generator;

  PoolOperator() : generator(0) {}
  PoolOperator(std::string l, PauliSum g)
      : label(std::move(l)), generator(std::move(g)) {}
};

/// JW images of the fermionic singles/doubles pool.
std::vector<PoolOperator> make_fermionic_pool(
    const ModeLayout& layout, const std::set<std::size_t>& occupied_e,
    const std::set<std::size_t>& occupied_p,
    std::vector<std::string>* warnings = nullptr);

/// Individual-string pool: generators i*P from the split JW images.
std::vector<PoolOperator> make_qubit_pool(
    const ModeLayout& layout, const std::set<std::size_t>& occupied_e,
    const std::set<std::size_t>& occupied_p,
    std::vector<std::string>* warnings = nullptr);

/// e^{theta tau} |psi> via the exact commuting-string factorization.
StateVector apply_exp_generator(const StateVector& psi,
                                const PauliSum& generator, double theta);

/// Ansatz state e^{t_n tau_n} ... e^{t_1 tau_1} |ref>.
StateVector apply_ansatz(const StateVector& reference,
                         const std::vector<PoolOperator>& generators,
                         const std::vector<double>& thetas);

/// Circuit realization: per generator, one Pauli-evolution block per string.
Circuit build_ansatz_circuit(const std::vector<PoolOperator>& generators,
                             const std::vector<double>& thetas,
                             std::size_t n_qubits);

/// |<psi|[H, tau]|psi>| per pool element (the ADAPT selection gradient).
std::vector<double> gradient_screen(const PauliSum& h, const StateVector& psi,
                                    const std::vector<PoolOperator>& pool);

struct OptimizeOutcome {
  std::vector<double> thetas;
  double energy = 0.0;
  bool converged = false;
};

/// Minimizes <psi(theta)|H|psi(theta)> with analytic reverse-mode gradients.
OptimizeOutcome optimize_parameters(const PauliSum& h,
                                    const std::vector<PoolOperator>& generators,
                                    const StateVector& reference,
                                    const std::vector<double>& theta_init,
                                    const MinimizeOptions& options = {});

struct AdaptOptions {
  double threshold = 1e-3;  // Ha, against exact_energy when provided
  std::optional<double> exact_energy;
  double gradient_floor = 1e-6;
  std::size_t max_iterations = 200;
  unsigned seed = 0;
  std::size_t stagnation_restarts = 3;
  MinimizeOptions optimizer{};
};

struct AdaptState {
  std::vector<std::size_t> selected;   // pool indices, in selection order
  std::vector<std::string> labels;
  std::vector<double> parameters;
  std::vector<double> energy_history;  // reference energy first
  std::uint64_t reference_mask = 0;
  bool converged = false;
  bool stagnated = false;
  std::string stop_reason;

  std::string to_json(const std::vector<PoolOperator>& pool) const;
};

struct AdaptResult {
  AdaptState state;
  Circuit circuit;
  double energy = 0.0;

  AdaptResult() : circuit(0) {}
};

/// ADAPT-VQE: iterate (screen -> select argmax -> append with theta=0 ->
/// re-optimize all parameters) until the energy error beats the threshold
/// (when the exact energy is supplied) or the screening gradient falls under
/// the floor. Deterministic under fixed pool order and seed; ties break to
/// the lowest pool index. Stagnation triggers seeded perturbation restarts
/// before giving up.
AdaptResult adapt_vqe(const PauliSum& h, const std::vector<PoolOperator>& pool,
                      const StateVector& reference, const AdaptOptions& options);

/// Reference determinant |occupied-mode bitmask>.
StateVector reference_state(const ModeLayout& layout,
                            const std::set<std::size_t>& occupied_e,
                            const std::set<std::size_t>& occupied_p);

}  // namespace protonpipe
