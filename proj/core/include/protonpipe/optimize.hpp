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

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace protonpipe {

/// Objective callback: returns f(x) and, when grad is non-null, writes the
/// analytic gradient into it.
using Objective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct MinimizeOptions {
  double gradient_tol = 1e-8;
  std::size_t max_evaluations = 4000;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;  // gradient norm below tolerance
  std::size_t evaluations = 0;
};

/// BFGS with backtracking Armijo line search. Monotone: the returned value
/// never exceeds f(x0). Convergence certifies stationarity only; saddle
/// points with vanishing gradient return immediately.
MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0,
                             const MinimizeOptions& options = {});

}  // namespace protonpipe
