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

#include <vector>

#include <Eigen/Dense>

#include "protonpipe/statevector.hpp"

namespace protonpipe {

/// Trace-one Hermitian PSD matrix over a qubit register.
class DensityOperator {
 public:
  static DensityOperator from_state(const StateVector& psi);
  /// Validates trace (1e-9), Hermiticity (1e-10) and PSD (psd_tol).
  static DensityOperator from_matrix(Eigen::MatrixXcd matrix,
                                     double psd_tol = 1e-8);

  std::size_t n_qubits() const { return n_qubits_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  double purity() const;

 private:
  DensityOperator(std::size_t n, Eigen::MatrixXcd m)
      : n_qubits_(n), matrix_(std::move(m)) {}
  std::size_t n_qubits_;
  Eigen::MatrixXcd matrix_;
};

/// Partial trace over the complement of `keep`.
DensityOperator reduced_density(const StateVector& psi,
                                const std::vector<std::size_t>& keep);

}  // namespace protonpipe
