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

#include "protonpipe/statevector.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "protonpipe/errors.hpp"

namespace protonpipe {

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(n_qubits),
      amplitudes_(Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits)) {
  amplitudes_(0) = 1.0;
}

StateVector StateVector::basis_state(std::size_t n_qubits, std::uint64_t index) {
  if (index >= (std::uint64_t{1} << n_qubits)) {
    throw ValidationError("basis index out of range");
  }
  Eigen::VectorXcd amps =
      Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(Eigen::VectorXcd amplitudes,
                                         double norm_tol) {
  const std::size_t dim = static_cast<std::size_t>(amplitudes.size());
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw ValidationError("amplitude count must be a power of two");
  }
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
  if (std::abs(amplitudes.norm() - 1.0) > norm_tol) {
    throw ValidationError("statevector is not normalized");
  }
  return StateVector(n, std::move(amplitudes));
}

StateVector run(const Circuit& c, const StateVector& initial) {
  if (c.n_qubits() != initial.n_qubits()) {
    throw DimensionError("circuit and state register sizes differ");
  }
  Eigen::VectorXcd amps = initial.amplitudes();
  for (const auto& g : c.gates()) apply_gate(g, amps);
  return StateVector::from_amplitudes(std::move(amps), 1e-8);
}

double expectation(const StateVector& psi, const PauliSum& h,
                   double* imag_residue) {
  if (psi.n_qubits() != h.n_qubits()) {
    throw DimensionError("state and operator widths differ");
  }
  if (!h.is_hermitian(1e-10)) {
    throw ValidationError("expectation requires a Hermitian-canonical operator");
  }
  const Complex value = psi.amplitudes().dot(h.apply(psi.amplitudes()));
  if (imag_residue) *imag_residue = std::abs(value.imag());
  return value.real();
}

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.n_qubits() != phi.n_qubits()) {
    throw DimensionError("states live on different registers");
  }
  return std::norm(psi.amplitudes().dot(phi.amplitudes()));
}

GroundState exact_ground_state(const PauliSum& h,
                               const std::optional<SectorSpec>& sector,
                               std::size_t dense_limit) {
  const std::size_t n = h.n_qubits();
  if (n > dense_limit) {
    throw ResourceError("exact diagonalization limited to " +
                        std::to_string(dense_limit) + " qubits");
  }
  const Eigen::MatrixXcd dense = h.to_dense(dense_limit);
  const std::uint64_t dim = std::uint64_t{1} << n;

  std::vector<std::uint64_t> basis;
  if (sector) {
    if (sector->layout.total_modes() != n) {
      throw DimensionError("sector layout does not match the operator");
    }
    const std::uint64_t e_mask =
        (std::uint64_t{1} << sector->layout.n_electron_modes) - 1;
    const std::uint64_t p_mask = ((std::uint64_t{1} << n) - 1) & ~e_mask;
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (static_cast<std::size_t>(std::popcount(x & e_mask)) ==
              sector->n_electrons &&
          static_cast<std::size_t>(std::popcount(x & p_mask)) ==
              sector->n_protons) {
        basis.push_back(x);
      }
    }
    if (basis.empty()) {
      throw SectorError("requested particle-number sector is empty");
    }
  } else {
    basis.resize(dim);
    for (std::uint64_t x = 0; x < dim; ++x) basis[x] = x;
  }

  Eigen::MatrixXcd block(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      block(i, j) = dense(basis[i], basis[j]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
  const Eigen::VectorXcd ground = es.eigenvectors().col(0);

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  for (std::size_t i = 0; i < basis.size(); ++i) amps(basis[i]) = ground(i);

  // Deterministic phase: largest-magnitude amplitude real positive, first
  // index winning ties.
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index k = 0; k < amps.size(); ++k) {
    const double mag = std::abs(amps(k));
    if (mag > best_mag + 1e-15) {
      best_mag = mag;
      best = k;
    }
  }
  const Complex phase = amps(best) / std::abs(amps(best));
  amps /= phase;

  return GroundState{es.eigenvalues()(0),
                     StateVector::from_amplitudes(std::move(amps), 1e-8)};
}

Eigen::MatrixXcd reduced_density_matrix(const StateVector& psi,
                                        const std::vector<std::size_t>& keep) {
  const std::size_t n = psi.n_qubits();
  if (keep.empty()) throw ValidationError("keep set must be non-empty");
  std::vector<std::size_t> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.back() >= n) {
    throw ValidationError("keep set must be unique qubit indices in range");
  }
  const std::size_t k = sorted.size();
  const std::size_t r = n - k;
  std::vector<std::size_t> rest;
  for (std::size_t q = 0, j = 0; q < n; ++q) {
    if (j < k && sorted[j] == q) {
      ++j;
    } else {
      rest.push_back(q);
    }
  }
  auto scatter = [](const std::vector<std::size_t>& bits, std::uint64_t x) {
    std::uint64_t out = 0;
    for (std::size_t b = 0; b < bits.size(); ++b) {
      if ((x >> b) & 1) out |= (std::uint64_t{1} << bits[b]);
    }
    return out;
  };
  const Eigen::Index kept_dim = Eigen::Index{1} << k;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kept_dim, kept_dim);
  const auto& amps = psi.amplitudes();
  for (std::uint64_t e = 0; e < (std::uint64_t{1} << r); ++e) {
    const std::uint64_t env = scatter(rest, e);
    for (Eigen::Index a = 0; a < kept_dim; ++a) {
      const Complex va = amps(scatter(sorted, a) | env);
      if (va == Complex{0.0, 0.0}) continue;
      for (Eigen::Index b = 0; b < kept_dim; ++b) {
        rho(a, b) += va * std::conj(amps(scatter(sorted, b) | env));
      }
    }
  }
  return rho;
}

Eigen::MatrixXcd orbital_1rdm(const StateVector& psi, const ModeLayout& layout,
                              bool electron_species) {
  if (psi.n_qubits() != layout.total_modes()) {
    throw DimensionError("state register does not match the mode layout");
  }
  const std::size_t count =
      electron_species ? layout.n_electron_modes : layout.n_proton_modes;
  const std::size_t offset = electron_species ? 0 : layout.n_electron_modes;
  Eigen::MatrixXcd gamma(count, count);
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t q = 0; q < count; ++q) {
      FermionOp op;
      op.add(1.0, {{offset + p, true}, {offset + q, false}});
      const PauliSum jw = jordan_wigner(op, layout);
      gamma(p, q) = psi.amplitudes().dot(jw.apply(psi.amplitudes()));
    }
  }
  return gamma;
}

void save_state(const StateVector& psi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open state file for writing: " + path);
  const std::uint64_t n = psi.n_qubits();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (Eigen::Index k = 0; k < psi.amplitudes().size(); ++k) {
    const double re = psi.amplitudes()(k).real();
    const double im = psi.amplitudes()(k).imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  out.close();

  nlohmann::json meta;
  meta["format"] = "protonpipe-state-v1";
  meta["n_qubits"] = n;
  meta["encoding"] = "little-endian interleaved re/im float64";
  std::ofstream side(path + ".json");
  side << meta.dump(2) << "\n";
}

StateVector load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open state file: " + path);
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n > 30) throw ValidationError("corrupt state file header");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd amps(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    double re = 0.0, im = 0.0;
    in.read(reinterpret_cast<char*>(&re), sizeof re);
    in.read(reinterpret_cast<char*>(&im), sizeof im);
    if (!in) throw ValidationError("state file truncated");
    amps(k) = Complex{re, im};
  }
  return StateVector::from_amplitudes(std::move(amps), 1e-6);
}

}  // namespace protonpipe
