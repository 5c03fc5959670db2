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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "protonpipe/coupling.hpp"
#include "protonpipe/optimize.hpp"
#include "protonpipe/statevector.hpp"

namespace protonpipe {

struct AqcConfig {
  double fidelity_target = 0.99;  // in (0, 1]
  std::size_t block_budget = 60;
  std::string pair_strategy = "greedy-probe";
  CouplingMap coupling{0};
  unsigned seed = 0;
  std::size_t full_reopt_period = 5;
  MinimizeOptions optimizer{};

  /// "high" -> fidelity target 0.99, "low" -> 0.97.
  static AqcConfig preset(const std::string& name, CouplingMap map,
                          unsigned seed = 0);
};

/// One fully parameterized two-qubit unitary: ZYZ locals on both qubits,
/// a three-angle canonical core, ZYZ locals again -- 15 angles.
struct AqcBlock {
  std::size_t q_lo = 0;
  std::size_t q_hi = 0;
  std::array<double, 15> angles{};
};

struct AqcResult {
  Circuit circuit;  // Unitary2Q blocks; transpile for native CZ form
  std::vector<AqcBlock> blocks;
  double final_cost = 1.0;
  double achieved_fidelity = 0.0;
  std::vector<double> cost_history;  // after each increment
  std::vector<std::pair<std::size_t, std::size_t>> chosen_pairs;
  bool converged = false;

  AqcResult() : circuit(0) {}
};

/// Greedy pair choice: the coupled pair whose optimal single-block update
/// would reduce the infidelity most (closed form via the SVD of the 4x4
/// cross matrix). Deterministic lexicographic tie-break; *zero_score flags
/// a fully converged probe.
std::pair<std::size_t, std::size_t> select_pair(const StateVector& current,
                                                const StateVector& target,
                                                const CouplingMap& map,
                                                double* score = nullptr,
                                                bool* zero_score = nullptr);

/// Local minimum of C = 1 - |<target|V(theta)|0>|^2 over all block angles.
/// Returns the optimized blocks and the cost reached.
double optimize_blocks(std::vector<AqcBlock>& blocks, const StateVector& target,
                       const MinimizeOptions& options = {});

/// Incremental compilation: grows identity-initialized blocks on
/// probe-selected coupled pairs until the fidelity target or block budget is
/// reached. Newest-block optimization each increment; periodic full
/// re-optimization every full_reopt_period increments.
AqcResult compile(const StateVector& target, const AqcConfig& config);

/// 4x4 unitary of a block (local basis: q_lo on the low bit).
Eigen::Matrix4cd block_unitary(const AqcBlock& block);

}  // namespace protonpipe
