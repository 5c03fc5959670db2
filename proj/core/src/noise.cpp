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

#include "protonpipe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "protonpipe/errors.hpp"

namespace protonpipe {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

std::string gate_key(const std::string& kind,
                     const std::vector<std::size_t>& qubits) {
  std::string key = kind + ":";
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    if (k) key += ',';
    key += std::to_string(qubits[k]);
  }
  return key;
}

void check_rate(double value, const char* what) {
  if (value < 0.0 || value > 1.0) {
    throw ValidationError(std::string(what) + " must lie in [0, 1], got " +
                          std::to_string(value));
  }
}

}  // namespace

NoiseModel NoiseModel::ideal(std::size_t n_qubits) {
  NoiseModel nm;
  nm.qubits_.resize(n_qubits);
  return nm;
}

const QubitNoise& NoiseModel::qubit(std::size_t q) const {
  if (q >= qubits_.size()) {
    throw ValidationError("noise model has no qubit " + std::to_string(q));
  }
  return qubits_[q];
}

GateNoise NoiseModel::gate_noise(const Gate& g) const {
  const std::string kind = lower(gate_kind_name(g.kind));
  std::vector<std::size_t> qubits{g.qubits[0]};
  if (g.is_two_qubit()) qubits.push_back(g.qubits[1]);
  auto it = keyed_.find(gate_key(kind, qubits));
  if (it != keyed_.end()) return it->second;
  if (qubits.size() == 2) {
    // Undirected coupler: try the reversed key as well.
    it = keyed_.find(gate_key(kind, {qubits[1], qubits[0]}));
    if (it != keyed_.end()) return it->second;
  }
  auto def = kind_defaults_.find(kind);
  if (def != kind_defaults_.end()) return def->second;
  return GateNoise{};
}

void NoiseModel::set_qubit(std::size_t q, QubitNoise noise) {
  if (q >= qubits_.size()) qubits_.resize(q + 1);
  if (noise.t2 > 2.0 * noise.t1 + 1e-12) {
    throw ValidationError("qubit " + std::to_string(q) +
                          " violates T2 <= 2*T1");
  }
  check_rate(noise.readout_p01, "readout_p01");
  check_rate(noise.readout_p10, "readout_p10");
  qubits_[q] = noise;
}

void NoiseModel::set_gate_default(const std::string& kind, GateNoise noise) {
  check_rate(noise.error, "gate error");
  kind_defaults_[lower(kind)] = noise;
}

void NoiseModel::set_gate_entry(const std::string& kind,
                                std::vector<std::size_t> qubits,
                                GateNoise noise) {
  check_rate(noise.error, "gate error");
  keyed_[gate_key(lower(kind), qubits)] = noise;
}

bool NoiseModel::is_ideal() const {
  for (const auto& q : qubits_) {
    if (std::isfinite(q.t1) || std::isfinite(q.t2) || q.readout_p01 != 0.0 ||
        q.readout_p10 != 0.0) {
      return false;
    }
  }
  auto live = [](const std::map<std::string, GateNoise>& m) {
    for (const auto& [k, v] : m) {
      if (v.error != 0.0) return true;
    }
    return false;
  };
  return !live(kind_defaults_) && !live(keyed_);
}

std::vector<std::pair<std::size_t, std::size_t>> NoiseModel::missing_edges(
    const std::set<std::pair<std::size_t, std::size_t>>& edges,
    const std::string& kind) const {
  std::vector<std::pair<std::size_t, std::size_t>> missing;
  const std::string k = lower(kind);
  for (const auto& [a, b] : edges) {
    if (!keyed_.count(gate_key(k, {a, b})) &&
        !keyed_.count(gate_key(k, {b, a}))) {
      missing.push_back({a, b});
    }
  }
  return missing;
}

NoiseModel NoiseModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("calibration JSON malformed: ") + e.what());
  }
  NoiseModel nm;
  if (!j.contains("qubits") || !j["qubits"].is_array()) {
    throw ValidationError("calibration JSON needs a `qubits` array");
  }
  std::size_t q = 0;
  for (const auto& entry : j["qubits"]) {
    QubitNoise noise;
    if (entry.contains("t1_us")) noise.t1 = entry["t1_us"].get<double>() * 1e-6;
    if (entry.contains("t2_us")) noise.t2 = entry["t2_us"].get<double>() * 1e-6;
    if (entry.contains("readout_p01")) noise.readout_p01 = entry["readout_p01"];
    if (entry.contains("readout_p10")) noise.readout_p10 = entry["readout_p10"];
    nm.set_qubit(q++, noise);
  }
  for (const auto& entry : j.value("gates", nlohmann::json::array())) {
    if (!entry.contains("kind")) {
      throw ValidationError("gate entry without a `kind`");
    }
    GateNoise noise;
    noise.error = entry.value("error", 0.0);
    noise.duration = entry.value("duration_ns", 0.0) * 1e-9;
    if (entry.contains("qubits") && !entry["qubits"].empty()) {
      std::vector<std::size_t> qubits;
      for (const auto& idx : entry["qubits"]) {
        qubits.push_back(idx.get<std::size_t>());
      }
      nm.set_gate_entry(entry["kind"], std::move(qubits), noise);
    } else {
      nm.set_gate_default(entry["kind"], noise);
    }
  }
  nm.eplg18_ = j.value("eplg18", 0.0);
  nm.timestamp_ = j.value("timestamp", "");
  return nm;
}

NoiseModel NoiseModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open calibration file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

namespace {

// Relaxation coherence factors over duration t.
struct RelaxationFactors {
  double e1;  // exp(-t/T1)
  double e2;  // exp(-t/T2)
};

RelaxationFactors relaxation_factors(const QubitNoise& q, double duration) {
  auto decay = [&](double T) {
    if (!std::isfinite(T) || duration <= 0.0) return 1.0;
    return std::exp(-duration / T);
  };
  return {decay(q.t1), decay(q.t2)};
}

// Process fidelity of the single-qubit relaxation channel.
double relaxation_process_fidelity(const RelaxationFactors& f) {
  return (1.0 + 2.0 * f.e2 + f.e1) / 4.0;
}

void apply_gate_to_density(const Gate& g, Eigen::MatrixXcd& rho) {
  // rho -> U rho U^+ column-by-column, then row-by-row.
  for (Eigen::Index col = 0; col < rho.cols(); ++col) {
    Eigen::VectorXcd column = rho.col(col);
    apply_gate(g, column);
    rho.col(col) = column;
  }
  rho.adjointInPlace();
  for (Eigen::Index col = 0; col < rho.cols(); ++col) {
    Eigen::VectorXcd column = rho.col(col);
    apply_gate(g, column);
    rho.col(col) = column;
  }
  rho.adjointInPlace();
}

// rho -> P rho P^+ for a Pauli letter placed on chosen qubits.
void pauli_conjugate(Eigen::MatrixXcd& rho, const PauliString& p) {
  const std::uint64_t mask = p.flip_mask();
  const std::uint64_t dim = static_cast<std::uint64_t>(rho.rows());
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  for (std::uint64_t x = 0; x < dim; ++x) {
    const Complex cx = p.basis_coefficient(x);
    for (std::uint64_t y = 0; y < dim; ++y) {
      out(x ^ mask, y ^ mask) =
          cx * rho(x, y) * std::conj(p.basis_coefficient(y));
    }
  }
  rho = std::move(out);
}

// Uniform depolarizing on the gate's qubits with parameter lambda.
void apply_depolarizing(Eigen::MatrixXcd& rho, double lambda,
                        const std::vector<std::size_t>& qubits,
                        std::size_t n_qubits) {
  if (lambda <= 0.0) return;
  const char letters[4] = {'I', 'X', 'Y', 'Z'};
  const std::size_t k = qubits.size();
  const std::size_t combos = k == 1 ? 4 : 16;
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (std::size_t c = 0; c < combos; ++c) {
    PauliString p(n_qubits);
    p.set_letter(qubits[0], letters[c % 4]);
    if (k == 2) p.set_letter(qubits[1], letters[c / 4]);
    Eigen::MatrixXcd term = rho;
    pauli_conjugate(term, p);
    mixed += term;
  }
  rho = (1.0 - lambda) * rho + (lambda / static_cast<double>(combos)) * mixed;
}

// Amplitude damping to |0> plus dephasing, elementwise on one qubit.
void apply_relaxation(Eigen::MatrixXcd& rho, std::size_t qubit,
                      const RelaxationFactors& f) {
  if (f.e1 == 1.0 && f.e2 == 1.0) return;
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const std::uint64_t dim = static_cast<std::uint64_t>(rho.rows());
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (x & bit) continue;
    for (std::uint64_t y = 0; y < dim; ++y) {
      if (y & bit) continue;
      // Quadruple (x,y), (x,y1), (x1,y), (x1,y1): update 00 before scaling 11.
      rho(x, y) += (1.0 - f.e1) * rho(x | bit, y | bit);
      rho(x, y | bit) *= f.e2;
      rho(x | bit, y) *= f.e2;
      rho(x | bit, y | bit) *= f.e1;
    }
  }
}

std::vector<std::size_t> gate_qubit_list(const Gate& g) {
  std::vector<std::size_t> qubits{g.qubits[0]};
  if (g.is_two_qubit()) qubits.push_back(g.qubits[1]);
  return qubits;
}

}  // namespace

double derived_depolarizing(const NoiseModel& nm, const Gate& g, bool* clamped) {
  if (clamped) *clamped = false;
  const GateNoise noise = nm.gate_noise(g);
  if (noise.error <= 0.0) return 0.0;
  const auto qubits = gate_qubit_list(g);
  const double dim = qubits.size() == 2 ? 4.0 : 2.0;
  double relax_pro = 1.0;
  for (std::size_t q : qubits) {
    relax_pro *= relaxation_process_fidelity(
        relaxation_factors(nm.qubit(q), noise.duration));
  }
  const double favg_target = 1.0 - noise.error;
  const double fpro_target = ((dim + 1.0) * favg_target - 1.0) / dim;
  const double floor_pro = 1.0 / (dim * dim);
  double lambda = (relax_pro - fpro_target) / (relax_pro - floor_pro);
  if (lambda < 0.0) {
    if (clamped) *clamped = true;
    lambda = 0.0;
  } else if (lambda > 1.0) {
    if (clamped) *clamped = true;
    lambda = 1.0;
  }
  return lambda;
}

DensityOperator noisy_evolve(const Circuit& c, const NoiseModel& nm,
                             std::size_t density_limit) {
  if (c.n_qubits() > density_limit) {
    throw ResourceError("density-matrix simulation limited to " +
                        std::to_string(density_limit) + " qubits");
  }
  if (nm.n_qubits() < c.n_qubits()) {
    throw ValidationError("noise model covers fewer qubits than the circuit");
  }
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Measure) continue;
    apply_gate_to_density(g, rho);
    const GateNoise noise = nm.gate_noise(g);
    const auto qubits = gate_qubit_list(g);
    const double lambda = derived_depolarizing(nm, g);
    apply_depolarizing(rho, lambda, qubits, c.n_qubits());
    for (std::size_t q : qubits) {
      apply_relaxation(rho, q,
                       relaxation_factors(nm.qubit(q), noise.duration));
    }
  }
  // Numerical cleanup: Hermitize before wrapping.
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityOperator::from_matrix(std::move(rho), 1e-7);
}

namespace {

// Basis-change circuit rotating each non-identity letter into Z.
void rotate_to_z_basis(Eigen::MatrixXcd& rho, const std::string& letters) {
  for (std::size_t q = 0; q < letters.size(); ++q) {
    if (letters[q] == 'X') {
      apply_gate_to_density(Gate{GateKind::H, {q, 0}, 0.0, {}}, rho);
    } else if (letters[q] == 'Y') {
      apply_gate_to_density(Gate{GateKind::RX, {q, 0}, M_PI / 2.0, {}}, rho);
    }
  }
}

// Readout-confused expectation of a Z-string over a diagonal distribution.
double confused_z_expectation(const Eigen::VectorXd& probabilities,
                              const std::string& letters,
                              const NoiseModel& nm) {
  double total = 0.0;
  const std::uint64_t dim = static_cast<std::uint64_t>(probabilities.size());
  for (std::uint64_t x = 0; x < dim; ++x) {
    double weight = probabilities(x);
    if (weight == 0.0) continue;
    double sign = 1.0;
    for (std::size_t q = 0; q < letters.size(); ++q) {
      if (letters[q] == 'I') continue;
      const QubitNoise& noise = nm.qubit(q);
      const bool bit = (x >> q) & 1;
      sign *= bit ? -(1.0 - 2.0 * noise.readout_p10)
                  : (1.0 - 2.0 * noise.readout_p01);
    }
    total += weight * sign;
  }
  return total;
}

}  // namespace

double noisy_expectation(const Circuit& c, const PauliSum& h,
                         const NoiseModel& nm, std::size_t density_limit) {
  if (h.n_qubits() != c.n_qubits()) {
    throw DimensionError("operator width does not match the circuit");
  }
  if (!h.is_hermitian(1e-10)) {
    throw ValidationError("noisy expectation needs a Hermitian operator");
  }
  const DensityOperator rho = noisy_evolve(c, nm, density_limit);
  double energy = 0.0;
  for (const auto& [letters, coeff] : h.terms()) {
    const PauliString p(letters);
    if (p.is_identity()) {
      energy += coeff.real();
      continue;
    }
    Eigen::MatrixXcd rotated = rho.matrix();
    rotate_to_z_basis(rotated, letters);
    const Eigen::VectorXd probabilities = rotated.diagonal().real();
    energy += coeff.real() * confused_z_expectation(probabilities, letters, nm);
  }
  return energy;
}

double noisy_expectation_sampled(const Circuit& c, const PauliSum& h,
                                 const NoiseModel& nm, std::size_t shots,
                                 unsigned seed, std::size_t density_limit) {
  if (shots == 0) throw ValidationError("shot count must be positive");
  if (!h.is_hermitian(1e-10)) {
    throw ValidationError("noisy expectation needs a Hermitian operator");
  }
  const DensityOperator rho = noisy_evolve(c, nm, density_limit);
  const std::size_t n = c.n_qubits();

  // Qubit-wise compatible grouping, greedy in canonical term order.
  struct Group {
    std::string basis;  // per-qubit letter, 'I' where unconstrained
    std::vector<std::pair<std::string, double>> terms;
  };
  std::vector<Group> groups;
  double constant = 0.0;
  for (const auto& [letters, coeff] : h.terms()) {
    if (PauliString(letters).is_identity()) {
      constant += coeff.real();
      continue;
    }
    bool placed = false;
    for (auto& group : groups) {
      bool compatible = true;
      for (std::size_t q = 0; q < n && compatible; ++q) {
        if (letters[q] != 'I' && group.basis[q] != 'I' &&
            group.basis[q] != letters[q]) {
          compatible = false;
        }
      }
      if (compatible) {
        for (std::size_t q = 0; q < n; ++q) {
          if (letters[q] != 'I') group.basis[q] = letters[q];
        }
        group.terms.push_back({letters, coeff.real()});
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back(Group{letters, {{letters, coeff.real()}}});
    }
  }

  std::mt19937 rng(seed);
  // 53-bit uniform in [0,1), stable across standard libraries.
  auto uniform = [&rng]() {
    const double hi = static_cast<double>(rng() >> 5);   // 27 bits
    const double lo = static_cast<double>(rng() >> 6);   // 26 bits
    return (hi * 67108864.0 + lo) / 9007199254740992.0;
  };

  double energy = constant;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (const auto& group : groups) {
    Eigen::MatrixXcd rotated = rho.matrix();
    rotate_to_z_basis(rotated, group.basis);
    Eigen::VectorXd probabilities = rotated.diagonal().real().cwiseMax(0.0);
    probabilities /= probabilities.sum();
    // Readout confusion as per-qubit stochastic maps on the distribution.
    for (std::size_t q = 0; q < n; ++q) {
      const QubitNoise& noise = nm.qubit(q);
      if (noise.readout_p01 == 0.0 && noise.readout_p10 == 0.0) continue;
      const std::uint64_t bit = std::uint64_t{1} << q;
      for (std::uint64_t x = 0; x < dim; ++x) {
        if (x & bit) continue;
        const double p0 = probabilities(x);
        const double p1 = probabilities(x | bit);
        probabilities(x) = (1.0 - noise.readout_p01) * p0 + noise.readout_p10 * p1;
        probabilities(x | bit) = noise.readout_p01 * p0 + (1.0 - noise.readout_p10) * p1;
      }
    }
    Eigen::VectorXd cdf(probabilities.size());
    double acc = 0.0;
    for (Eigen::Index x = 0; x < probabilities.size(); ++x) {
      acc += probabilities(x);
      cdf(x) = acc;
    }
    std::vector<double> sums(group.terms.size(), 0.0);
    for (std::size_t s = 0; s < shots; ++s) {
      const double u = uniform() * acc;
      const std::uint64_t sample = static_cast<std::uint64_t>(
          std::lower_bound(cdf.data(), cdf.data() + cdf.size(), u) - cdf.data());
      for (std::size_t t = 0; t < group.terms.size(); ++t) {
        double value = 1.0;
        const std::string& letters = group.terms[t].first;
        for (std::size_t q = 0; q < n; ++q) {
          if (letters[q] != 'I' && ((sample >> q) & 1)) value = -value;
        }
        sums[t] += value;
      }
    }
    for (std::size_t t = 0; t < group.terms.size(); ++t) {
      energy += group.terms[t].second * sums[t] / static_cast<double>(shots);
    }
  }
  return energy;
}

}  // namespace protonpipe
