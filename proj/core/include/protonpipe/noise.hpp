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

#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "protonpipe/circuit.hpp"
#include "protonpipe/density.hpp"
#include "protonpipe/pauli.hpp"

namespace protonpipe {

struct QubitNoise {
  double t1 = std::numeric_limits<double>::infinity();  // seconds
  double t2 = std::numeric_limits<double>::infinity();  // seconds
  double readout_p01 = 0.0;  // P(read 1 | prepared 0)
  double readout_p10 = 0.0;  // P(read 0 | prepared 1)
};

struct GateNoise {
  double error = 0.0;     // average gate error from calibration
  double duration = 0.0;  // seconds
};

/// Per-qubit relaxation/readout data and per-gate error/duration tables.
/// Gate entries may be keyed on specific qubits or act as kind-wide
/// defaults.
class NoiseModel {
 public:
  static NoiseModel ideal(std::size_t n_qubits);
  /// Parses the calibration JSON (see the schema in the repository README);
  /// validates T2 <= 2*T1 per qubit and all rates in [0, 1].
  static NoiseModel from_json(const std::string& text);
  static NoiseModel from_file(const std::string& path);

  std::size_t n_qubits() const { return qubits_.size(); }
  const QubitNoise& qubit(std::size_t q) const;
  /// Most specific entry: exact qubit match, else kind default, else zero.
  GateNoise gate_noise(const Gate& g) const;

  void set_qubit(std::size_t q, QubitNoise noise);
  void set_gate_default(const std::string& kind, GateNoise noise);
  void set_gate_entry(const std::string& kind, std::vector<std::size_t> qubits,
                      GateNoise noise);

  bool is_ideal() const;
  double eplg18() const { return eplg18_; }
  const std::string& timestamp() const { return timestamp_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Coupling-map edges without a dedicated entry for `kind`.
  std::vector<std::pair<std::size_t, std::size_t>> missing_edges(
      const std::set<std::pair<std::size_t, std::size_t>>& edges,
      const std::string& kind) const;

 private:
  std::vector<QubitNoise> qubits_;
  std::map<std::string, GateNoise> kind_defaults_;
  std::map<std::string, GateNoise> keyed_;  // "kind:q0[,q1]"
  double eplg18_ = 0.0;
  std::string timestamp_;
  std::vector<std::string> warnings_;
};

/// Depolarizing parameter chosen so the depolarizing-then-relaxation noise
/// pair reproduces the calibrated average gate error; 0 (with a warning in
/// the model) when relaxation alone already exceeds it.
double derived_depolarizing(const NoiseModel& nm, const Gate& g,
                            bool* clamped = nullptr);

/// Density-matrix evolution: unitary, then depolarizing, then thermal
/// relaxation after every gate. Measure gates are no-ops (readout enters
/// through the expectation functions).
DensityOperator noisy_evolve(const Circuit& c, const NoiseModel& nm,
                             std::size_t density_limit = 10);

/// Exact mode: Tr(rho H) with per-qubit readout confusion folded into each
/// term in its measurement basis.
double noisy_expectation(const Circuit& c, const PauliSum& h,
                         const NoiseModel& nm, std::size_t density_limit = 10);

/// Shot mode: groups qubit-wise compatible terms, samples readout-confused
/// bitstring distributions, and returns the sample-mean energy.
double noisy_expectation_sampled(const Circuit& c, const PauliSum& h,
                                 const NoiseModel& nm, std::size_t shots,
                                 unsigned seed,
                                 std::size_t density_limit = 10);

}  // namespace protonpipe
