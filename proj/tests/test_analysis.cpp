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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "protonpipe/analysis.hpp"
#include "protonpipe/errors.hpp"
#include "protonpipe/statevector.hpp"
#include "support/oracles.hpp"

using namespace protonpipe;

TEST_CASE("barrier extraction") {
  std::vector<PathPoint> points;
  points.push_back({"300", -600.666e-3, "CASCI", {}});
  points.push_back({"030", -588.809e-3, "CASCI", {}});
  points.push_back({"300", -578.785e-3, "AQC-low", {}});
  points.push_back({"030", -551.645e-3, "AQC-low", {}});
  points.push_back({"210", -590.0e-3, "CASCI", {}});

  SUBCASE("reference barriers reproduce the table arithmetic") {
    CHECK(barrier(points, "CASCI").delta_e ==
          doctest::Approx(11.857e-3).epsilon(1e-9));
    CHECK(barrier(points, "AQC-low").delta_e ==
          doctest::Approx(27.140e-3).epsilon(1e-9));
  }
  SUBCASE("equal endpoints give zero") {
    std::vector<PathPoint> flat{{"300", -1.0, "HF", {}}, {"030", -1.0, "HF", {}}};
    CHECK(barrier(flat, "HF").delta_e == 0.0);
  }
  SUBCASE("uncertainties add in quadrature") {
    std::vector<PathPoint> noisy{{"300", -0.548, "ZNE", 0.007},
                                 {"030", -0.524, "ZNE", 0.010}};
    const Barrier b = barrier(noisy, "ZNE");
    REQUIRE(b.sigma.has_value());
    CHECK(*b.sigma == doctest::Approx(std::sqrt(0.007 * 0.007 + 0.010 * 0.010))
                          .epsilon(1e-12));
  }
  SUBCASE("missing endpoint raises DataError") {
    CHECK_THROWS_AS(barrier(points, "VQE-deep"), DataError);
  }
}

TEST_CASE("rate constant arithmetic") {
  SUBCASE("zero barrier gives ratio 1") {
    CHECK(rate_constant_ratio(0.0, 120.0) == doctest::Approx(1.0));
  }
  SUBCASE("kB*120K barrier gives 1/e") {
    const double delta = kBoltzmannHaPerK * 120.0;  // = 0.3800 mHa
    CHECK(delta == doctest::Approx(0.380e-3).epsilon(1e-3));
    CHECK(rate_constant_ratio(delta, 120.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("monotone in both arguments") {
    double previous = rate_constant_ratio(1e-4, 100.0);
    for (double delta = 2e-4; delta <= 1e-3; delta += 1e-4) {
      const double value = rate_constant_ratio(delta, 100.0);
      CHECK(value < previous);
      previous = value;
    }
    previous = rate_constant_ratio(5e-4, 50.0);
    for (double t = 100.0; t <= 400.0; t += 50.0) {
      const double value = rate_constant_ratio(5e-4, t);
      CHECK(value > previous);
      previous = value;
    }
  }
  SUBCASE("non-positive temperature is rejected") {
    CHECK_THROWS_AS(rate_constant_ratio(1e-3, 0.0), ValidationError);
    CHECK_THROWS_AS(rate_sensitivity(1e-3, -5.0), ValidationError);
  }
}

TEST_CASE("rate sensitivity") {
  SUBCASE("0.08 mHa at 120 K costs about 21% in the rate") {
    const RateSensitivity s = rate_sensitivity(0.08e-3, 120.0);
    CHECK(std::abs(s.linearized) > 0.20);
    CHECK(std::abs(s.linearized) < 0.22);
  }
  SUBCASE("zero error means zero sensitivity") {
    const RateSensitivity s = rate_sensitivity(0.0, 120.0);
    CHECK(s.linearized == 0.0);
    CHECK(s.exact == 0.0);
  }
  SUBCASE("Taylor bound |exact - linearized| < (dE/kBT)^2 / 2") {
    for (double delta : {1e-5, 5e-5, 1e-4}) {
      const RateSensitivity s = rate_sensitivity(delta, 150.0);
      const double x = delta / (kBoltzmannHaPerK * 150.0);
      CHECK(std::abs(s.exact - s.linearized) < 0.5 * x * x);
    }
  }
}

TEST_CASE("entanglement entropy") {
  SUBCASE("pure states carry zero entropy") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(2, 2) = 1.0;
    CHECK(entanglement_entropy(rho) == doctest::Approx(0.0));
  }
  SUBCASE("maximally mixed qubit gives ln 2") {
    const Eigen::MatrixXcd rho = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK(entanglement_entropy(rho) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("random two-qubit state matches the eigenvalue-sum oracle") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector psi =
          StateVector::from_amplitudes(oracles::random_state(2, rng));
      const Eigen::MatrixXcd rho = reduced_density_matrix(psi, {0});
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
      double expected = 0.0;
      for (Eigen::Index k = 0; k < 2; ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-14) expected -= p * std::log(p);
      }
      CHECK(entanglement_entropy(rho) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("basis invariance under random unitaries") {
    std::mt19937 rng(7);
    const StateVector psi =
        StateVector::from_amplitudes(oracles::random_state(3, rng));
    const Eigen::MatrixXcd rho = reduced_density_matrix(psi, {0, 2});
    const double base = entanglement_entropy(rho);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXcd u = oracles::random_unitary(4, rng);
      CHECK(entanglement_entropy(Eigen::MatrixXcd(u * rho * u.adjoint())) ==
            doctest::Approx(base).epsilon(1e-10));
    }
  }
  SUBCASE("trace deviation beyond 1e-6 is rejected") {
    const Eigen::MatrixXcd bad = 0.52 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(entanglement_entropy(bad), ValidationError);
  }
}

namespace {

OrbitalGrid gaussian_grid(std::size_t n_orbitals) {
  // 1D Gaussians on a uniform line grid, extended to 3D points on the x axis.
  const std::size_t n_points = 161;
  const double x0 = -8.0, x1 = 8.0;
  const double h = (x1 - x0) / static_cast<double>(n_points - 1);
  OrbitalGrid grid;
  grid.points.resize(n_points, 3);
  grid.weights.resize(n_points);
  grid.amplitudes.resize(n_points, n_orbitals);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = x0 + h * static_cast<double>(i);
    grid.points.row(i) << x, 0.0, 0.0;
    grid.weights(i) = h;
    for (std::size_t j = 0; j < n_orbitals; ++j) {
      const double center = -3.0 + 6.0 * static_cast<double>(j);
      grid.amplitudes(i, j) =
          std::pow(M_PI, -0.25) * std::exp(-0.5 * (x - center) * (x - center));
    }
  }
  return grid;
}

}  // namespace

TEST_CASE("proton density") {
  const OrbitalGrid grid = gaussian_grid(2);

  SUBCASE("single occupied orbital reproduces |phi0|^2 and its centroid") {
    Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(2, 2);
    gamma(0, 0) = 1.0;
    const ProtonDensity density = proton_density(gamma, grid);
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
      CHECK(density.values(i) ==
            doctest::Approx(grid.amplitudes(i, 0) * grid.amplitudes(i, 0))
                .epsilon(1e-12));
    }
    CHECK(density.integral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(density.mean_position(0) == doctest::Approx(-3.0).epsilon(1e-6));
  }
  SUBCASE("gamma = I/n integrates to one for normalized orbitals") {
    const Eigen::MatrixXcd gamma = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    const ProtonDensity density = proton_density(gamma, grid);
    CHECK(density.integral == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("random PSD gamma stays pointwise non-negative and matches the "
          "double-sum oracle") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = Complex{g(rng), g(rng)};
    Eigen::MatrixXcd gamma = b * b.adjoint();
    gamma /= gamma.trace().real();
    const ProtonDensity density = proton_density(gamma, grid);
    std::uniform_int_distribution<std::size_t> pick(0, grid.n_points() - 1);
    for (int probe = 0; probe < 10; ++probe) {
      const std::size_t i = pick(rng);
      Complex direct = 0.0;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          direct += gamma(p, q) * grid.amplitudes(i, p) * grid.amplitudes(i, q);
      CHECK(density.values(i) == doctest::Approx(direct.real()).epsilon(1e-10));
      CHECK(density.values(i) >= -1e-12);
    }
    // Quadrature integral equals Tr(gamma) for an orthonormal-ish basis.
    CHECK(density.integral == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("dimension mismatch is rejected") {
    const Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    CHECK_THROWS_AS(proton_density(gamma, grid), DimensionError);
  }
}

TEST_CASE("orbital grid CSV parsing") {
  const std::string csv =
      "x,y,z,w,phi0,phi1\n"
      "0.0,0.0,0.0,0.5,1.0,0.0\n"
      "1.0,0.0,0.0,0.5,0.0,1.0\n";
  const OrbitalGrid grid = OrbitalGrid::from_csv(csv);
  CHECK(grid.n_points() == 2);
  CHECK(grid.n_orbitals() == 2);
  CHECK(grid.weights(0) == 0.5);
  CHECK(grid.amplitudes(1, 1) == 1.0);

  CHECK_THROWS_AS(OrbitalGrid::from_csv("x,y,z,w,phi0\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(OrbitalGrid::from_csv(""), ValidationError);
}
