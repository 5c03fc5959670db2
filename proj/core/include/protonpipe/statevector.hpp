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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protonpipe/circuit.hpp"
#include "protonpipe/fermion.hpp"
#include "protonpipe/pauli.hpp"

namespace protonpipe {

/// Unit-norm amplitude vector over 2^n computational basis states
/// (qubit 0 is the least significant bit).
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(std::size_t n_qubits);
  static StateVector basis_state(std::size_t n_qubits, std::uint64_t index);
  /// Validates normalization within norm_tol.
  static StateVector from_amplitudes(Eigen::VectorXcd amplitudes,
                                     double norm_tol = 1e-10);

  std::size_t n_qubits() const { return n_qubits_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

 private:
  StateVector(std::size_t n_qubits, Eigen::VectorXcd amps)
      : n_qubits_(n_qubits), amplitudes_(std::move(amps)) {}
  std::size_t n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Applies the circuit's gates in order (measurements are no-ops).
StateVector run(const Circuit& c, const StateVector& initial);

/// <psi|H|psi> for Hermitian-canonical H. Throws ValidationError when H has
/// imaginary canonical coefficients; imag_residue reports the numerical
/// leftover when given.
double expectation(const StateVector& psi, const PauliSum& h,
                   double* imag_residue = nullptr);

/// |<psi|phi>|^2.
double fidelity(const StateVector& psi, const StateVector& phi);

struct SectorSpec {
  ModeLayout layout;
  std::size_t n_electrons = 0;
  std::size_t n_protons = 0;
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
};

/// Lowest eigenpair by dense diagonalization; restricted to the joint
/// particle-number eigenspace when a sector is given. The phase convention
/// makes the largest-magnitude amplitude real positive.
GroundState exact_ground_state(const PauliSum& h,
                               const std::optional<SectorSpec>& sector = {},
                               std::size_t dense_limit = kDefaultDenseLimit);

/// Partial trace over the complement of `keep` (ascending qubit indices;
/// kept qubit k becomes bit k of the reduced index).
Eigen::MatrixXcd reduced_density_matrix(const StateVector& psi,
                                        const std::vector<std::size_t>& keep);

/// One-particle reduced density matrix gamma_PQ = <psi| a+_P a_Q |psi> over
/// the species' spin orbitals.
Eigen::MatrixXcd orbital_1rdm(const StateVector& psi, const ModeLayout& layout,
                              bool electron_species);

/// Binary dump: 8-byte little-endian qubit count, then interleaved re/im
/// doubles; a JSON metadata sidecar is written next to it (path + ".json").
void save_state(const StateVector& psi, const std::string& path);
StateVector load_state(const std::string& path);

}  // namespace protonpipe
