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

#include "protonpipe/adapt.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "protonpipe/errors.hpp"

namespace protonpipe {

std::vector<PoolOperator> make_fermionic_pool(
    const ModeLayout& layout, const std::set<std::size_t>& occupied_e,
    const std::set<std::size_t>& occupied_p, std::vector<std::string>* warnings) {
  const ExcitationPool pool = excitation_pool(layout, occupied_e, occupied_p);
  if (warnings) *warnings = pool.warnings;
  std::vector<PoolOperator> out;
  out.reserve(pool.elements.size());
  for (const auto& element : pool.elements) {
    out.emplace_back(element.label, jordan_wigner(element.op, layout));
  }
  return out;
}

std::vector<PoolOperator> make_qubit_pool(
    const ModeLayout& layout, const std::set<std::size_t>& occupied_e,
    const std::set<std::size_t>& occupied_p, std::vector<std::string>* warnings) {
  const ExcitationPool pool = excitation_pool(layout, occupied_e, occupied_p);
  if (warnings) *warnings = pool.warnings;
  std::vector<PauliSum> jw;
  jw.reserve(pool.elements.size());
  for (const auto& element : pool.elements) {
    jw.push_back(jordan_wigner(element.op, layout));
  }
  std::vector<PoolOperator> out;
  for (const PauliString& p : qubit_pool(jw)) {
    PauliSum generator(layout.total_modes());
    generator.add_term(p, Complex{0.0, 1.0});
    out.emplace_back(p.letters(), std::move(generator));
  }
  return out;
}

namespace {

// Per-string factors of e^{theta tau}: tau = sum_k i w_k P_k with commuting
// strings, so the exponential splits exactly.
struct GeneratorTerm {
  PauliString string;
  double weight;
};

std::vector<GeneratorTerm> generator_terms(const PauliSum& generator) {
  std::vector<GeneratorTerm> out;
  out.reserve(generator.n_terms());
  for (const auto& [letters, coeff] : generator.terms()) {
    if (std::abs(coeff.real()) > 1e-10) {
      throw ValidationError("generator is not anti-Hermitian");
    }
    out.push_back({PauliString(letters), coeff.imag()});
  }
  return out;
}

void apply_exp_in_place(Eigen::VectorXcd& amps,
                        const std::vector<GeneratorTerm>& terms, double theta) {
  for (const auto& term : terms) {
    const double angle = theta * term.weight;
    if (angle == 0.0) continue;
    const Complex c = std::cos(angle);
    const Complex is = Complex{0.0, std::sin(angle)};
    const std::uint64_t mask = term.string.flip_mask();
    const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
    if (mask == 0) {
      // Diagonal string: per-amplitude phase.
      for (std::uint64_t j = 0; j < dim; ++j) {
        amps(j) = c * amps(j) + is * term.string.basis_coefficient(j) * amps(j);
      }
      continue;
    }
    for (std::uint64_t j = 0; j < dim; ++j) {
      if (j > (j ^ mask)) continue;  // visit each {j, j^mask} pair once
      const std::uint64_t k = j ^ mask;
      const Complex aj = amps(j);
      const Complex ak = amps(k);
      // P|j> = f_j |k>, P|k> = f_k |j>.
      const Complex fj = term.string.basis_coefficient(j);
      const Complex fk = term.string.basis_coefficient(k);
      amps(j) = c * aj + is * fk * ak;
      amps(k) = c * ak + is * fj * aj;
    }
  }
}

}  // namespace

StateVector apply_exp_generator(const StateVector& psi,
                                const PauliSum& generator, double theta) {
  if (psi.n_qubits() != generator.n_qubits()) {
    throw DimensionError("generator width does not match the state");
  }
  Eigen::VectorXcd amps = psi.amplitudes();
  apply_exp_in_place(amps, generator_terms(generator), theta);
  return StateVector::from_amplitudes(std::move(amps), 1e-8);
}

StateVector apply_ansatz(const StateVector& reference,
                         const std::vector<PoolOperator>& generators,
                         const std::vector<double>& thetas) {
  if (generators.size() != thetas.size()) {
    throw DimensionError("parameter count does not match generator count");
  }
  Eigen::VectorXcd amps = reference.amplitudes();
  for (std::size_t k = 0; k < generators.size(); ++k) {
    apply_exp_in_place(amps, generator_terms(generators[k].generator), thetas[k]);
  }
  return StateVector::from_amplitudes(std::move(amps), 1e-8);
}

Circuit build_ansatz_circuit(const std::vector<PoolOperator>& generators,
                             const std::vector<double>& thetas,
                             std::size_t n_qubits) {
  if (generators.size() != thetas.size()) {
    throw DimensionError("parameter count does not match generator count");
  }
  Circuit c(n_qubits);
  for (std::size_t k = 0; k < generators.size(); ++k) {
    for (const auto& [letters, coeff] : generators[k].generator.terms()) {
      // e^{i theta w P} = exp(-i(-2 theta w)/2 P).
      const double angle = -2.0 * thetas[k] * coeff.imag();
      if (angle == 0.0) continue;
      c.extend(pauli_evolution(PauliString(letters), angle));
    }
  }
  return c;
}

std::vector<double> gradient_screen(const PauliSum& h, const StateVector& psi,
                                    const std::vector<PoolOperator>& pool) {
  if (pool.empty()) return {};
  const Eigen::VectorXcd h_psi = h.apply(psi.amplitudes());
  std::vector<double> out;
  out.reserve(pool.size());
  for (const auto& op : pool) {
    const Eigen::VectorXcd tau_psi = op.generator.apply(psi.amplitudes());
    // <psi|[H,tau]|psi> = 2 Re <H psi | tau psi> for anti-Hermitian tau.
    out.push_back(std::abs(2.0 * h_psi.dot(tau_psi).real()));
  }
  return out;
}

namespace {

struct AnsatzObjective {
  const PauliSum& h;
  const std::vector<PoolOperator>& generators;
  const StateVector& reference;
  std::vector<std::vector<GeneratorTerm>> terms;

  AnsatzObjective(const PauliSum& h_in,
                  const std::vector<PoolOperator>& gens,
                  const StateVector& ref)
      : h(h_in), generators(gens), reference(ref) {
    terms.reserve(gens.size());
    for (const auto& g : gens) terms.push_back(generator_terms(g.generator));
  }

  double operator()(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
    Eigen::VectorXcd psi = reference.amplitudes();
    for (std::size_t k = 0; k < terms.size(); ++k) {
      apply_exp_in_place(psi, terms[k], theta(k));
    }
    Eigen::VectorXcd mu = h.apply(psi);
    const double energy = psi.dot(mu).real();
    if (grad) {
      grad->resize(theta.size());
      // Reverse sweep: at step k, psi = psi_k and mu = U_{k+1}^+ ... H psi_n.
      for (std::size_t k = terms.size(); k-- > 0;) {
        Eigen::VectorXcd tau_psi = psi;
        {
          Eigen::VectorXcd tmp = Eigen::VectorXcd::Zero(psi.size());
          for (const auto& term : terms[k]) {
            const std::uint64_t mask = term.string.flip_mask();
            for (std::uint64_t j = 0;
                 j < static_cast<std::uint64_t>(psi.size()); ++j) {
              tmp(j ^ mask) += Complex{0.0, term.weight} *
                               term.string.basis_coefficient(j) * psi(j);
            }
          }
          tau_psi = std::move(tmp);
        }
        (*grad)(k) = 2.0 * mu.dot(tau_psi).real();
        apply_exp_in_place(psi, terms[k], -theta(k));
        apply_exp_in_place(mu, terms[k], -theta(k));
      }
    }
    return energy;
  }
};

}  // namespace

OptimizeOutcome optimize_parameters(const PauliSum& h,
                                    const std::vector<PoolOperator>& generators,
                                    const StateVector& reference,
                                    const std::vector<double>& theta_init,
                                    const MinimizeOptions& options) {
  if (generators.empty()) {
    throw ValidationError("optimize_parameters needs at least one generator");
  }
  AnsatzObjective objective(h, generators, reference);
  Eigen::VectorXd x0 =
      Eigen::Map<const Eigen::VectorXd>(theta_init.data(), theta_init.size());
  const MinimizeResult r = minimize_bfgs(
      [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
        return objective(x, g);
      },
      x0, options);
  OptimizeOutcome out;
  out.thetas.assign(r.x.data(), r.x.data() + r.x.size());
  out.energy = r.value;
  out.converged = r.converged;
  return out;
}

StateVector reference_state(const ModeLayout& layout,
                            const std::set<std::size_t>& occupied_e,
                            const std::set<std::size_t>& occupied_p) {
  std::uint64_t mask = 0;
  for (std::size_t m : occupied_e) {
    if (m >= layout.n_electron_modes) {
      throw ValidationError("occupied electron mode out of range");
    }
    mask |= std::uint64_t{1} << m;
  }
  for (std::size_t m : occupied_p) {
    if (m >= layout.n_proton_modes) {
      throw ValidationError("occupied proton mode out of range");
    }
    mask |= std::uint64_t{1} << layout.proton_mode(m);
  }
  return StateVector::basis_state(layout.total_modes(), mask);
}

AdaptResult adapt_vqe(const PauliSum& h, const std::vector<PoolOperator>& pool,
                      const StateVector& reference,
                      const AdaptOptions& options) {
  if (options.threshold <= 0.0) {
    throw ValidationError("ADAPT threshold must be positive");
  }
  if (pool.empty()) throw ValidationError("ADAPT pool must not be empty");

  AdaptResult result;
  AdaptState& state = result.state;
  {
    // Record the reference determinant when it is a basis state.
    Eigen::Index idx = 0;
    reference.amplitudes().cwiseAbs().maxCoeff(&idx);
    state.reference_mask = static_cast<std::uint64_t>(idx);
  }

  std::vector<PoolOperator> selected_ops;
  std::vector<double> thetas;
  double energy = expectation(reference, h);
  state.energy_history.push_back(energy);

  std::mt19937 rng(options.seed);
  std::size_t restarts_left = options.stagnation_restarts;

  auto reached_threshold = [&]() {
    return options.exact_energy &&
           energy - *options.exact_energy < options.threshold;
  };

  while (state.selected.size() < options.max_iterations) {
    if (reached_threshold()) {
      state.converged = true;
      state.stop_reason = "energy threshold reached";
      break;
    }
    const StateVector current = apply_ansatz(reference, selected_ops, thetas);
    const std::vector<double> grads = gradient_screen(h, current, pool);
    std::size_t best = 0;
    for (std::size_t k = 1; k < grads.size(); ++k) {
      if (grads[k] > grads[best]) best = k;  // ties keep the lowest index
    }
    if (grads[best] < options.gradient_floor) {
      if (!options.exact_energy) {
        state.converged = true;
        state.stop_reason = "gradient floor reached";
        break;
      }
      // Threshold not met: try a seeded perturbation restart before giving up.
      if (restarts_left > 0 && !thetas.empty()) {
        --restarts_left;
        std::normal_distribution<double> noise(0.0, 0.1);
        std::vector<double> perturbed = thetas;
        for (auto& t : perturbed) t += noise(rng);
        const OptimizeOutcome retry = optimize_parameters(
            h, selected_ops, reference, perturbed, options.optimizer);
        if (retry.energy < energy - 1e-12) {
          thetas = retry.thetas;
          energy = retry.energy;
          state.energy_history.push_back(energy);
          continue;
        }
        continue;
      }
      state.stagnated = true;
      state.stop_reason = "gradient floor reached before energy threshold";
      break;
    }

    selected_ops.push_back(pool[best]);
    state.selected.push_back(best);
    state.labels.push_back(pool[best].label);
    thetas.push_back(0.0);
    const OptimizeOutcome opt =
        optimize_parameters(h, selected_ops, reference, thetas, options.optimizer);
    thetas = opt.thetas;
    energy = opt.energy;
    state.energy_history.push_back(energy);
  }
  if (state.stop_reason.empty()) {
    if (reached_threshold()) {
      state.converged = true;
      state.stop_reason = "energy threshold reached";
    } else {
      state.stop_reason = "iteration limit reached";
    }
  }

  state.parameters = thetas;
  result.energy = energy;
  result.circuit = build_ansatz_circuit(selected_ops, thetas, h.n_qubits());
  return result;
}

std::string AdaptState::to_json(const std::vector<PoolOperator>& pool) const {
  nlohmann::json j;
  j["reference_mask"] = reference_mask;
  j["selected"] = selected;
  j["labels"] = labels;
  j["parameters"] = parameters;
  j["energy_history"] = energy_history;
  j["converged"] = converged;
  j["stagnated"] = stagnated;
  j["stop_reason"] = stop_reason;
  std::vector<std::string> generators;
  generators.reserve(selected.size());
  for (std::size_t idx : selected) {
    generators.push_back(pool.at(idx).generator.to_text());
  }
  j["generators"] = generators;
  return j.dump(2);
}

}  // namespace protonpipe
