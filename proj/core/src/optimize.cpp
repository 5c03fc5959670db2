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

#include "protonpipe/optimize.hpp"

#include <cmath>

namespace protonpipe {

MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0,
                             const MinimizeOptions& options) {
  MinimizeResult result;
  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd grad(n);
  double value = f(x, &grad);
  ++result.evaluations;

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  constexpr double kArmijo = 1e-4;

  while (result.evaluations < options.max_evaluations) {
    const double gnorm = grad.norm();
    if (gnorm < options.gradient_tol) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd direction = -(h_inv * grad);
    double slope = direction.dot(grad);
    if (!(slope < 0.0)) {
      // Reset a corrupted curvature model.
      h_inv.setIdentity();
      direction = -grad;
      slope = -gnorm * gnorm;
    }

    double step = 1.0;
    double next_value = 0.0;
    Eigen::VectorXd next_x, next_grad(n);
    bool improved = false;
    for (int halving = 0; halving < 48; ++halving) {
      next_x = x + step * direction;
      next_value = f(next_x, &next_grad);
      ++result.evaluations;
      if (next_value <= value + kArmijo * step * slope) {
        improved = true;
        break;
      }
      step *= 0.5;
      if (result.evaluations >= options.max_evaluations) break;
    }
    if (!improved) {
      if (h_inv.isIdentity(1e-14)) break;  // no descent even along -grad
      h_inv.setIdentity();
      continue;
    }

    const Eigen::VectorXd s = next_x - x;
    const Eigen::VectorXd y = next_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd left = identity - rho * s * y.transpose();
      h_inv = left * h_inv * left.transpose() + rho * s * s.transpose();
    } else {
      h_inv.setIdentity();
    }
    x = std::move(next_x);
    grad = next_grad;
    value = next_value;
  }

  result.x = std::move(x);
  result.value = value;
  result.gradient_norm = grad.norm();
  if (result.gradient_norm < options.gradient_tol) result.converged = true;
  return result;
}

}  // namespace protonpipe
