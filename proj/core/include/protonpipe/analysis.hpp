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

#include "protonpipe/density.hpp"
#include "protonpipe/hamiltonian.hpp"

namespace protonpipe {

/// Boltzmann constant in Hartree per Kelvin (CODATA).
inline constexpr double kBoltzmannHaPerK = 3.166811563e-6;

/// One energy along the adiabatic path for one method.
struct PathPoint {
  std::string label;  // LMR digit triple, e.g. "210"
  double energy = 0.0;                  // Ha
  std::string method;                   // CASCI, HF, VQE-deep, ...
  std::optional<double> uncertainty;    // Ha

  LmrWeights weights() const { return LmrWeights::from_label(label); }
};

struct Barrier {
  double delta_e = 0.0;  // Ha
  std::optional<double> sigma;
};

/// Delta E = E(030) - E(300) for one method tag; uncertainties propagate in
/// quadrature when both endpoints carry them. Throws DataError when an
/// endpoint is missing.
Barrier barrier(const std::vector<PathPoint>& points, const std::string& method);

/// exp(-dE / kB T); only relative rates are physically meaningful.
double rate_constant_ratio(double delta_e_ha, double temperature_k);

struct RateSensitivity {
  double linearized = 0.0;  // -dE / kB T
  double exact = 0.0;       // exp(-dE / kB T) - 1
};
RateSensitivity rate_sensitivity(double delta_e_ha, double temperature_k);

/// Von Neumann entropy -Tr(rho ln rho), natural log, eigenvalues below
/// 1e-14 treated as zero. The raw-matrix overload validates the trace
/// within 1e-6.
double entanglement_entropy(const DensityOperator& rho);
double entanglement_entropy(const Eigen::MatrixXcd& rho);

/// Protonic spatial-orbital samples on a quadrature grid.
struct OrbitalGrid {
  Eigen::MatrixXd points;      // n_points x 3, Angstrom
  Eigen::VectorXd weights;     // quadrature volume elements
  Eigen::MatrixXd amplitudes;  // n_points x n_orbitals

  std::size_t n_points() const { return points.rows(); }
  std::size_t n_orbitals() const { return amplitudes.cols(); }

  /// CSV with header `x,y,z,w,phi0,phi1,...`.
  static OrbitalGrid from_csv(const std::string& text);
  static OrbitalGrid from_file(const std::string& path);
};

struct ProtonDensity {
  Eigen::VectorXd values;          // rho(r_i) >= 0
  Eigen::Vector3d mean_position;   // quadrature <r>
  double integral = 0.0;           // quadrature integral of rho
};

/// rho(r) = sum_PQ gamma_PQ phi_P(r) phi_Q(r) with the spatial (spin
/// pre-summed) 1-RDM; also returns the grid-quadrature position expectation.
ProtonDensity proton_density(const Eigen::MatrixXcd& gamma,
                             const OrbitalGrid& grid);

}  // namespace protonpipe
