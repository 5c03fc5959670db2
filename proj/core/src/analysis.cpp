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

#include "protonpipe/analysis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "protonpipe/errors.hpp"

namespace protonpipe {

Barrier barrier(const std::vector<PathPoint>& points,
                const std::string& method) {
  const PathPoint* left = nullptr;
  const PathPoint* middle = nullptr;
  for (const auto& p : points) {
    if (p.method != method) continue;
    if (p.label == "300") left = &p;
    if (p.label == "030") middle = &p;
  }
  if (!left || !middle) {
    throw DataError("barrier needs the 300 and 030 points for method `" +
                    method + "`");
  }
  Barrier out;
  out.delta_e = middle->energy - left->energy;
  if (left->uncertainty && middle->uncertainty) {
    out.sigma = std::sqrt(*left->uncertainty * *left->uncertainty +
                          *middle->uncertainty * *middle->uncertainty);
  }
  return out;
}

double rate_constant_ratio(double delta_e_ha, double temperature_k) {
  if (temperature_k <= 0.0) {
    throw ValidationError("temperature must be positive");
  }
  return std::exp(-delta_e_ha / (kBoltzmannHaPerK * temperature_k));
}

RateSensitivity rate_sensitivity(double delta_e_ha, double temperature_k) {
  if (temperature_k <= 0.0) {
    throw ValidationError("temperature must be positive");
  }
  RateSensitivity out;
  const double ratio = delta_e_ha / (kBoltzmannHaPerK * temperature_k);
  out.linearized = -ratio;
  out.exact = std::expm1(-ratio);
  return out;
}

double entanglement_entropy(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError("density matrix must be square");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 ||
      std::abs(rho.trace().imag()) > 1e-6) {
    throw ValidationError("density matrix trace deviates from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-14) entropy -= p * std::log(p);
  }
  return entropy;
}

double entanglement_entropy(const DensityOperator& rho) {
  return entanglement_entropy(rho.matrix());
}

OrbitalGrid OrbitalGrid::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::array<double, 4>> geometry;
  std::vector<std::vector<double>> amplitude_rows;
  std::size_t n_orbitals = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      // Header row: x,y,z,w,phi0,...
      std::size_t fields = 1;
      for (char c : line) fields += (c == ',');
      if (fields < 5 || line.substr(0, 1) != "x") {
        throw ParseError("expected header `x,y,z,w,phi0,...`", lineno);
      }
      n_orbitals = fields - 4;
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("bad numeric cell `" + cell + "`", lineno);
      }
    }
    if (row.size() != 4 + n_orbitals) {
      throw ParseError("row has " + std::to_string(row.size()) +
                       " cells, expected " + std::to_string(4 + n_orbitals),
                       lineno);
    }
    geometry.push_back({row[0], row[1], row[2], row[3]});
    amplitude_rows.push_back(
        std::vector<double>(row.begin() + 4, row.end()));
  }
  if (!have_header || geometry.empty()) {
    throw ValidationError("orbital grid is empty");
  }
  OrbitalGrid grid;
  grid.points.resize(geometry.size(), 3);
  grid.weights.resize(geometry.size());
  grid.amplitudes.resize(geometry.size(), n_orbitals);
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    grid.points(i, 0) = geometry[i][0];
    grid.points(i, 1) = geometry[i][1];
    grid.points(i, 2) = geometry[i][2];
    grid.weights(i) = geometry[i][3];
    for (std::size_t j = 0; j < n_orbitals; ++j) {
      grid.amplitudes(i, j) = amplitude_rows[i][j];
    }
  }
  return grid;
}

OrbitalGrid OrbitalGrid::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open grid file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_csv(buffer.str());
}

ProtonDensity proton_density(const Eigen::MatrixXcd& gamma,
                             const OrbitalGrid& grid) {
  const std::size_t n = grid.n_orbitals();
  if (gamma.rows() != static_cast<Eigen::Index>(n) ||
      gamma.cols() != static_cast<Eigen::Index>(n)) {
    throw DimensionError("1-RDM dimension does not match the grid orbitals");
  }
  ProtonDensity out;
  out.values.resize(grid.n_points());
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    const Eigen::VectorXd phi = grid.amplitudes.row(i);
    out.values(i) = (phi.transpose().cast<Complex>() * gamma *
                     phi.cast<Complex>())(0).real();
  }
  const Eigen::VectorXd weighted = out.values.cwiseProduct(grid.weights);
  out.integral = weighted.sum();
  Eigen::Vector3d numerator = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    numerator += weighted(i) * grid.points.row(i).transpose();
  }
  out.mean_position =
      out.integral != 0.0 ? Eigen::Vector3d(numerator / out.integral)
                          : Eigen::Vector3d::Zero();
  return out;
}

}  // namespace protonpipe
