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

#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protonpipe/circuit.hpp"

namespace protonpipe {

/// Local gate folding: randomly selected two-qubit gates G are replaced by
/// G G^+ G until the two-qubit count reaches round(lambda * original).
/// The noiseless unitary is unchanged; deterministic under the seed.
Circuit fold(const Circuit& c, double lambda, unsigned seed);

/// Expectation-value samples indexed by noise scale and replicate.
struct ZneDataset {
  std::vector<double> lambdas;               // one entry per noise scale
  std::vector<std::vector<double>> samples;  // replicates per scale

  void validate() const;  // >= 2 distinct scales, scale 1 present, counts > 0
  std::size_t total_samples() const;
};

struct FitReport {
  std::size_t degree = 0;
  Eigen::VectorXd coefficients;  // ascending powers
  double intercept = 0.0;
  double intercept_se = 0.0;
  std::vector<std::pair<std::size_t, double>> holdout_rmse;  // per candidate
  std::vector<std::string> notes;
};

/// Least-squares polynomial fits per candidate degree with per-scale
/// stratified holdout selection (default 25% of replicates, seeded split),
/// then a final full-data fit of the winning degree. Ties go to the lower
/// degree; degrees with more parameters than training scales are skipped
/// with a note.
FitReport fit_extrapolate(const ZneDataset& data,
                          const std::set<std::size_t>& candidate_degrees,
                          double holdout_fraction = 0.25, unsigned seed = 0);

struct BarrierEstimate {
  double delta_e = 0.0;  // Ha
  double sigma = 0.0;    // Ha
  FitReport left;
  FitReport middle;  // for diff-first this holds the difference fit
};

/// Fit both datasets independently and difference the intercepts; sigma is
/// the quadrature sum of the intercept standard errors.
BarrierEstimate barrier_fit_first(const ZneDataset& left,
                                  const ZneDataset& middle,
                                  const std::set<std::size_t>& degrees,
                                  double holdout_fraction = 0.25,
                                  unsigned seed = 0);

/// Replicate-paired per-scale differences, then one extrapolation.
/// Throws on mismatched scale grids or replicate counts.
BarrierEstimate barrier_diff_first(const ZneDataset& left,
                                   const ZneDataset& middle,
                                   const std::set<std::size_t>& degrees,
                                   double holdout_fraction = 0.25,
                                   unsigned seed = 0);

ZneDataset paired_difference(const ZneDataset& left, const ZneDataset& middle);

struct BootstrapInterval {
  double median = 0.0;
  double p15 = 0.0;
  double p85 = 0.0;
  std::vector<std::string> notes;
};

/// One stratified bootstrap replicate: per-scale resampling with
/// replacement, preserving replicate counts exactly.
ZneDataset resample_stratified(const ZneDataset& data, std::mt19937& rng);

/// Per-scale stratified resampling with replacement (replicate counts
/// preserved), refitting the fixed degree each iteration; returns the
/// empirical median and 15th/85th percentiles of the intercept.
BootstrapInterval bootstrap_intercept(const ZneDataset& data,
                                      std::size_t degree, std::size_t n_boot,
                                      unsigned seed);

/// Fit-first barrier bootstrap: left and middle resampled independently,
/// interval taken over intercept differences.
BootstrapInterval bootstrap_barrier_fit_first(const ZneDataset& left,
                                              const ZneDataset& middle,
                                              std::size_t degree_left,
                                              std::size_t degree_middle,
                                              std::size_t n_boot,
                                              unsigned seed);

}  // namespace protonpipe
