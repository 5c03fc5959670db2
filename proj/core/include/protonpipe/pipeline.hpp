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

#include <set>
#include <string>
#include <vector>

#include "protonpipe/analysis.hpp"

namespace protonpipe {

/// Full-pipeline configuration; see PipelineConfig::from_json for the file
/// schema. Every stage can be toggled; downstream stages are skipped when
/// their inputs are missing.
struct PipelineConfig {
  std::string left_integrals;
  std::string middle_integrals;
  std::string right_integrals;
  std::set<std::size_t> occupied_electrons;
  std::set<std::size_t> occupied_protons;

  bool stage_hf = true;
  bool stage_vqe_deep = true;
  bool stage_vqe_shallow = true;
  bool stage_aqc_high = true;
  bool stage_aqc_low = true;
  bool stage_zne = true;

  double deep_threshold = 1e-3;     // Ha
  double shallow_threshold = 1e-2;  // Ha
  std::string pool_kind = "fermionic";  // fermionic | qubit
  std::size_t adapt_max_iterations = 200;

  std::size_t aqc_block_budget = 40;
  std::string coupling_spec = "line:4";

  std::string calibration_path;  // empty: built-in mild depolarizing model
  std::vector<double> zne_lambdas{1.0, 2.0, 3.0, 4.0};
  std::size_t zne_replicates = 6;
  std::size_t zne_shots = 0;  // 0 = exact density-matrix mode
  std::set<std::size_t> zne_degrees{1, 2};
  std::size_t bootstrap_replicates = 500;

  std::string density_grid_path;  // optional CSV
  std::vector<double> temperatures;  // default 80..300 K, 12 points
  unsigned seed = 7;

  static PipelineConfig from_json(const std::string& text);
  static PipelineConfig from_file(const std::string& path);
  /// Canonical dump (also the config-hash input).
  std::string to_json() const;
};

struct StageStatus {
  std::string name;
  std::string status;  // "ok", "failed", "skipped"
  std::string detail;
};

struct PipelineResult {
  std::string run_dir;
  std::vector<PathPoint> path_points;
  std::vector<StageStatus> stages;
  std::uint64_t config_hash = 0;

  bool stage_ok(const std::string& name) const;
};

/// Executes assemble -> interpolate(7 labels) -> exact diagonalization ->
/// ADAPT-VQE (deep/shallow) -> ADAPT-AQC (high/low) -> noisy ZNE on 300/030,
/// writing artifacts under run_dir/<stage>/<label>/ plus result tables and a
/// manifest. Deterministic: identical config and seed give byte-identical
/// tables.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::string& run_dir);

}  // namespace protonpipe
