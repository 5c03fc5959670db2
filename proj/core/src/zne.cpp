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

#include "protonpipe/zne.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "protonpipe/errors.hpp"

namespace protonpipe {

namespace {

// Deterministic bounded integer and Fisher-Yates shuffle (stable across
// standard libraries, unlike std::shuffle).
std::size_t bounded(std::mt19937& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

template <typename T>
void shuffle_vector(std::vector<T>& v, std::mt19937& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    std::swap(v[k - 1], v[bounded(rng, k)]);
  }
}

}  // namespace

Circuit fold(const Circuit& c, double lambda, unsigned seed) {
  if (lambda < 1.0) throw ValidationError("fold factor must be >= 1");
  std::vector<std::size_t> two_qubit_positions;
  for (std::size_t k = 0; k < c.gates().size(); ++k) {
    if (c.gates()[k].is_two_qubit()) two_qubit_positions.push_back(k);
  }
  const std::size_t n2 = two_qubit_positions.size();
  if (n2 == 0 || lambda == 1.0) return c;

  const long target = std::lround(lambda * static_cast<double>(n2));
  const std::size_t units =
      static_cast<std::size_t>(std::max(0l, (target - static_cast<long>(n2)) / 2));
  const std::size_t base = units / n2;
  const std::size_t remainder = units % n2;

  std::vector<std::size_t> order = two_qubit_positions;
  std::mt19937 rng(seed);
  shuffle_vector(order, rng);
  std::vector<std::size_t> folds(c.gates().size(), 0);
  for (std::size_t pos : two_qubit_positions) folds[pos] = base;
  for (std::size_t k = 0; k < remainder; ++k) ++folds[order[k]];

  Circuit out(c.n_qubits());
  for (std::size_t k = 0; k < c.gates().size(); ++k) {
    const Gate& g = c.gates()[k];
    out.append(g);
    if (!g.is_two_qubit()) continue;
    for (std::size_t f = 0; f < folds[k]; ++f) {
      out.append(g.inverse());
      out.append(g);
    }
  }
  return out;
}

void ZneDataset::validate() const {
  if (lambdas.size() != samples.size()) {
    throw ValidationError("scale and sample lists differ in length");
  }
  if (lambdas.size() < 2) {
    throw ValidationError("a fit needs at least two distinct noise scales");
  }
  bool has_one = false;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (lambdas[k] < 1.0 - 1e-12) {
      throw ValidationError("noise scales must be >= 1");
    }
    if (std::abs(lambdas[k] - 1.0) < 1e-12) has_one = true;
    if (samples[k].empty()) {
      throw ValidationError("every noise scale needs at least one replicate");
    }
    for (std::size_t j = k + 1; j < lambdas.size(); ++j) {
      if (std::abs(lambdas[k] - lambdas[j]) < 1e-12) {
        throw ValidationError("duplicate noise scale in dataset");
      }
    }
  }
  if (!has_one) {
    throw ValidationError("the unmitigated scale lambda = 1 must be present");
  }
}

std::size_t ZneDataset::total_samples() const {
  std::size_t total = 0;
  for (const auto& s : samples) total += s.size();
  return total;
}

namespace {

struct PolynomialFit {
  Eigen::VectorXd coefficients;  // ascending powers
  double intercept_se = 0.0;
  bool se_defined = true;
};

double poly_eval(const Eigen::VectorXd& coeffs, double x) {
  double acc = 0.0;
  for (Eigen::Index k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs(k);
  return acc;
}

// Ordinary least squares over individual samples.
PolynomialFit ols_fit(const std::vector<double>& xs,
                      const std::vector<double>& ys, std::size_t degree) {
  const std::size_t n = xs.size();
  const std::size_t p = degree + 1;
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pow_x = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      design(i, j) = pow_x;
      pow_x *= xs[i];
    }
    rhs(i) = ys[i];
  }
  PolynomialFit fit;
  fit.coefficients = design.colPivHouseholderQr().solve(rhs);
  const double rss = (design * fit.coefficients - rhs).squaredNorm();
  if (n > p) {
    const double sigma2 = rss / static_cast<double>(n - p);
    const Eigen::MatrixXd xtx_inv =
        (design.transpose() * design).ldlt().solve(
            Eigen::MatrixXd::Identity(p, p));
    fit.intercept_se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(0, 0)));
  } else {
    fit.intercept_se = 0.0;
    fit.se_defined = false;
  }
  return fit;
}

void flatten(const ZneDataset& data, std::vector<double>& xs,
             std::vector<double>& ys) {
  for (std::size_t k = 0; k < data.lambdas.size(); ++k) {
    for (double y : data.samples[k]) {
      xs.push_back(data.lambdas[k]);
      ys.push_back(y);
    }
  }
}

}  // namespace

FitReport fit_extrapolate(const ZneDataset& data,
                          const std::set<std::size_t>& candidate_degrees,
                          double holdout_fraction, unsigned seed) {
  data.validate();
  if (candidate_degrees.empty()) {
    throw ValidationError("no candidate polynomial degrees supplied");
  }
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0) {
    throw ValidationError("holdout fraction must lie in [0, 1)");
  }

  FitReport report;

  // Stratified per-scale holdout split.
  std::mt19937 rng(seed);
  std::vector<double> train_x, train_y, hold_x, hold_y;
  for (std::size_t k = 0; k < data.lambdas.size(); ++k) {
    const std::size_t count = data.samples[k].size();
    std::size_t holdout =
        static_cast<std::size_t>(std::lround(holdout_fraction * count));
    if (holdout >= count) holdout = count - 1;  // keep at least one in train
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    shuffle_vector(order, rng);
    for (std::size_t i = 0; i < count; ++i) {
      const double y = data.samples[k][order[i]];
      if (i < holdout) {
        hold_x.push_back(data.lambdas[k]);
        hold_y.push_back(y);
      } else {
        train_x.push_back(data.lambdas[k]);
        train_y.push_back(y);
      }
    }
  }
  const bool have_holdout = !hold_x.empty();
  if (!have_holdout) {
    report.notes.push_back(
        "holdout split empty; degree selection used training RMSE");
  }

  const std::size_t n_scales = data.lambdas.size();
  bool have_best = false;
  std::size_t best_degree = 0;
  double best_rmse = 0.0;
  for (std::size_t degree : candidate_degrees) {
    if (degree + 1 > n_scales) {
      report.notes.push_back("degree " + std::to_string(degree) +
                             " skipped: more parameters than noise scales");
      continue;
    }
    const PolynomialFit fit = ols_fit(train_x, train_y, degree);
    const std::vector<double>& ex = have_holdout ? hold_x : train_x;
    const std::vector<double>& ey = have_holdout ? hold_y : train_y;
    double sse = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const double r = ey[i] - poly_eval(fit.coefficients, ex[i]);
      sse += r * r;
    }
    const double rmse = std::sqrt(sse / static_cast<double>(ex.size()));
    report.holdout_rmse.push_back({degree, rmse});
    if (!have_best || rmse < best_rmse - 1e-15) {
      have_best = true;
      best_degree = degree;
      best_rmse = rmse;
    }
  }
  if (!have_best) {
    throw ValidationError("all candidate degrees were skipped");
  }

  // Final fit of the selected degree over the full dataset.
  std::vector<double> xs, ys;
  flatten(data, xs, ys);
  const PolynomialFit fit = ols_fit(xs, ys, best_degree);
  report.degree = best_degree;
  report.coefficients = fit.coefficients;
  report.intercept = fit.coefficients(0);
  report.intercept_se = fit.intercept_se;
  if (!fit.se_defined) {
    report.notes.push_back("no residual degrees of freedom; SE reported as 0");
  }
  return report;
}

BarrierEstimate barrier_fit_first(const ZneDataset& left,
                                  const ZneDataset& middle,
                                  const std::set<std::size_t>& degrees,
                                  double holdout_fraction, unsigned seed) {
  BarrierEstimate out;
  out.left = fit_extrapolate(left, degrees, holdout_fraction, seed);
  out.middle = fit_extrapolate(middle, degrees, holdout_fraction, seed + 1);
  out.delta_e = out.middle.intercept - out.left.intercept;
  out.sigma = std::sqrt(out.left.intercept_se * out.left.intercept_se +
                        out.middle.intercept_se * out.middle.intercept_se);
  return out;
}

ZneDataset paired_difference(const ZneDataset& left, const ZneDataset& middle) {
  left.validate();
  middle.validate();
  if (left.lambdas.size() != middle.lambdas.size()) {
    throw ValidationError("noise-scale grids differ in size");
  }
  ZneDataset diff;
  for (std::size_t k = 0; k < left.lambdas.size(); ++k) {
    if (std::abs(left.lambdas[k] - middle.lambdas[k]) > 1e-12) {
      throw ValidationError("noise-scale grids are not aligned");
    }
    if (left.samples[k].size() != middle.samples[k].size()) {
      throw ValidationError("replicate counts differ at scale " +
                            std::to_string(left.lambdas[k]));
    }
    diff.lambdas.push_back(left.lambdas[k]);
    std::vector<double> deltas(left.samples[k].size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      deltas[i] = middle.samples[k][i] - left.samples[k][i];
    }
    diff.samples.push_back(std::move(deltas));
  }
  return diff;
}

BarrierEstimate barrier_diff_first(const ZneDataset& left,
                                   const ZneDataset& middle,
                                   const std::set<std::size_t>& degrees,
                                   double holdout_fraction, unsigned seed) {
  BarrierEstimate out;
  const ZneDataset diff = paired_difference(left, middle);
  out.middle = fit_extrapolate(diff, degrees, holdout_fraction, seed);
  out.delta_e = out.middle.intercept;
  out.sigma = out.middle.intercept_se;
  return out;
}

namespace {

double percentile(std::vector<double> sorted_values, double p) {
  std::sort(sorted_values.begin(), sorted_values.end());
  const std::size_t n = sorted_values.size();
  if (n == 1) return sorted_values[0];
  const double h = (static_cast<double>(n) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

std::vector<double> bootstrap_intercepts(const ZneDataset& data,
                                         std::size_t degree,
                                         std::size_t n_boot, std::mt19937& rng) {
  std::vector<double> intercepts;
  intercepts.reserve(n_boot);
  std::vector<double> xs, ys;
  for (std::size_t b = 0; b < n_boot; ++b) {
    const ZneDataset replicate = resample_stratified(data, rng);
    xs.clear();
    ys.clear();
    flatten(replicate, xs, ys);
    intercepts.push_back(ols_fit(xs, ys, degree).coefficients(0));
  }
  return intercepts;
}

BootstrapInterval interval_from(std::vector<double> intercepts) {
  BootstrapInterval out;
  out.median = percentile(intercepts, 0.5);
  out.p15 = percentile(intercepts, 0.15);
  out.p85 = percentile(intercepts, 0.85);
  if (std::abs(out.p85 - out.p15) < 1e-15) {
    out.notes.push_back("degenerate data: interval collapsed to the median");
  }
  return out;
}

}  // namespace

ZneDataset resample_stratified(const ZneDataset& data, std::mt19937& rng) {
  ZneDataset out;
  out.lambdas = data.lambdas;
  out.samples.reserve(data.samples.size());
  for (const auto& pool : data.samples) {
    std::vector<double> drawn(pool.size());
    for (auto& value : drawn) value = pool[bounded(rng, pool.size())];
    out.samples.push_back(std::move(drawn));
  }
  return out;
}

BootstrapInterval bootstrap_intercept(const ZneDataset& data,
                                      std::size_t degree, std::size_t n_boot,
                                      unsigned seed) {
  data.validate();
  if (n_boot < 100) {
    throw ValidationError("bootstrap needs at least 100 replicates");
  }
  std::mt19937 rng(seed);
  return interval_from(bootstrap_intercepts(data, degree, n_boot, rng));
}

BootstrapInterval bootstrap_barrier_fit_first(const ZneDataset& left,
                                              const ZneDataset& middle,
                                              std::size_t degree_left,
                                              std::size_t degree_middle,
                                              std::size_t n_boot,
                                              unsigned seed) {
  left.validate();
  middle.validate();
  if (n_boot < 100) {
    throw ValidationError("bootstrap needs at least 100 replicates");
  }
  std::mt19937 rng(seed);
  const std::vector<double> l = bootstrap_intercepts(left, degree_left, n_boot, rng);
  const std::vector<double> m =
      bootstrap_intercepts(middle, degree_middle, n_boot, rng);
  std::vector<double> deltas(n_boot);
  for (std::size_t k = 0; k < n_boot; ++k) deltas[k] = m[k] - l[k];
  return interval_from(std::move(deltas));
}

}  // namespace protonpipe
