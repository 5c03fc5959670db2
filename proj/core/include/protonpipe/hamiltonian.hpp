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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protonpipe/integrals.hpp"
#include "protonpipe/pauli.hpp"

namespace protonpipe {

/// Convex weights along the Left/Middle/Right path, normalized to sum 1 at
/// construction so a digit label like "210" maps to exact thirds.
struct LmrWeights {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  LmrWeights(double a, double b, double g);
  /// Parses a three-digit label, e.g. "210" -> (2/3, 1/3, 0).
  static LmrWeights from_label(const std::string& label);
  /// Digit label when the weights are exact thirds, "a,b,g" otherwise.
  std::string label() const;
};

/// The seven-point adiabatic trajectory 300 -> 210 -> ... -> 003.
const std::vector<std::string>& lmr_trajectory();

/// Qubit image of the full second-quantized Hamiltonian:
///   sum v_PQ a+_P a_Q + sum g_PQpq a+_P a+_p a_q a_Q
///   + sum h_pq a+_p a_q + 1/2 sum <pq|rs> a+_p a+_q a_s a_r + e_core.
PauliSum assemble(const NeoIntegrals& ints);

/// alpha*H_L + beta*H_M + gamma*H_R in canonical form.
PauliSum interpolate(const PauliSum& h_left, const PauliSum& h_middle,
                     const PauliSum& h_right, const LmrWeights& w);

struct FnoSelection {
  Eigen::MatrixXd rotation;     // columns: kept natural orbitals
  Eigen::VectorXd occupations;  // descending
};

/// Keeps the n_keep eigenvectors of a one-particle density matrix with the
/// largest occupation numbers. The density must be symmetric and PSD within
/// psd_tol.
FnoSelection fno_select(const Eigen::MatrixXd& density, std::size_t n_keep,
                        double psd_tol = 1e-8);

/// Symmetric orthogonalization transform S^{-1/2}. Throws ConditioningError
/// when the smallest overlap eigenvalue is at or below min_eigenvalue.
Eigen::MatrixXd lowdin(const Eigen::MatrixXd& overlap,
                       double min_eigenvalue = 1e-8);

}  // namespace protonpipe
