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

#include "protonpipe/hamiltonian.hpp"

#include <algorithm>
#include <vector>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "protonpipe/errors.hpp"

namespace protonpipe {

LmrWeights::LmrWeights(double a, double b, double g) {
  if (a < 0.0 || b < 0.0 || g < 0.0) {
    throw ValidationError("LMR weights must be non-negative");
  }
  const double sum = a + b + g;
  if (sum <= 0.0) throw ValidationError("LMR weights must not all vanish");
  alpha = a / sum;
  beta = b / sum;
  gamma = g / sum;
}

LmrWeights LmrWeights::from_label(const std::string& label) {
  if (label.size() != 3 || !std::isdigit(label[0]) || !std::isdigit(label[1]) ||
      !std::isdigit(label[2])) {
    throw ValidationError("LMR label must be three digits, got `" + label + "`");
  }
  return LmrWeights(label[0] - '0', label[1] - '0', label[2] - '0');
}

std::string LmrWeights::label() const {
  const double da = alpha * 3.0, db = beta * 3.0, dg = gamma * 3.0;
  const long ia = std::lround(da), ib = std::lround(db), ig = std::lround(dg);
  if (std::abs(da - ia) < 1e-9 && std::abs(db - ib) < 1e-9 &&
      std::abs(dg - ig) < 1e-9 && ia + ib + ig == 3) {
    return std::to_string(ia) + std::to_string(ib) + std::to_string(ig);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g", alpha, beta, gamma);
  return buf;
}

const std::vector<std::string>& lmr_trajectory() {
  static const std::vector<std::string> labels = {"300", "210", "120", "030",
                                                  "021", "012", "003"};
  return labels;
}

PauliSum assemble(const NeoIntegrals& ints) {
  const ModeLayout& layout = ints.layout;
  const std::size_t nE = layout.n_electron_modes;
  const std::size_t nP = layout.n_proton_modes;

  FermionOp op;
  for (std::size_t P = 0; P < nP; ++P)
    for (std::size_t Q = 0; Q < nP; ++Q) {
      const double v = ints.v1p(P, Q);
      if (v != 0.0)
        op.add(v, {{layout.proton_mode(P), true}, {layout.proton_mode(Q), false}});
    }
  for (std::size_t P = 0; P < nP; ++P)
    for (std::size_t Q = 0; Q < nP; ++Q)
      for (std::size_t p = 0; p < nE; ++p)
        for (std::size_t q = 0; q < nE; ++q) {
          const double v = ints.g(P, Q, p, q);
          if (v != 0.0)
            op.add(v, {{layout.proton_mode(P), true},
                       {p, true},
                       {q, false},
                       {layout.proton_mode(Q), false}});
        }
  for (std::size_t p = 0; p < nE; ++p)
    for (std::size_t q = 0; q < nE; ++q) {
      const double v = ints.h1e(p, q);
      if (v != 0.0) op.add(v, {{p, true}, {q, false}});
    }
  // 1/2 sum <pq|rs> a+_p a+_q a_s a_r (physicists' storage).
  for (std::size_t p = 0; p < nE; ++p)
    for (std::size_t q = 0; q < nE; ++q)
      for (std::size_t r = 0; r < nE; ++r)
        for (std::size_t s = 0; s < nE; ++s) {
          const double v = ints.h2(p, q, r, s);
          if (v != 0.0)
            op.add(0.5 * v, {{p, true}, {q, true}, {s, false}, {r, false}});
        }

  PauliSum h = jordan_wigner(op, layout);
  if (ints.e_core != 0.0) {
    h.add_term(std::string(layout.total_modes(), 'I'), ints.e_core);
  }
  return h;
}

PauliSum interpolate(const PauliSum& h_left, const PauliSum& h_middle,
                     const PauliSum& h_right, const LmrWeights& w) {
  PauliSum out(h_left.n_qubits());
  out = add_scaled(out, w.alpha, h_left);
  out = add_scaled(out, w.beta, h_middle);
  out = add_scaled(out, w.gamma, h_right);
  return out;
}

namespace {

// Descending-eigenvalue decomposition of a symmetric matrix with a
// deterministic sign convention (largest-|component| entry positive).
void sorted_eigh(const Eigen::MatrixXd& m, Eigen::VectorXd& values,
                 Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::Index n = m.rows();
  values.resize(n);
  vectors.resize(n, n);
  // Stable descending order: ties keep the solver's column order, so a
  // degenerate spectrum (e.g. the identity) is not permuted.
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  for (Eigen::Index k = 0; k < n; ++k) {
    values(k) = es.eigenvalues()(order[k]);
    Eigen::VectorXd v = es.eigenvectors().col(order[k]);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    vectors.col(k) = v;
  }
}

}  // namespace

FnoSelection fno_select(const Eigen::MatrixXd& density, std::size_t n_keep,
                        double psd_tol) {
  if (density.rows() != density.cols()) {
    throw DimensionError("density matrix must be square");
  }
  if ((density - density.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("density matrix is not symmetric");
  }
  if (n_keep > static_cast<std::size_t>(density.rows())) {
    throw ValidationError("n_keep exceeds the density dimension");
  }
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  sorted_eigh(density, values, vectors);
  if (values.size() > 0 && values.minCoeff() < -psd_tol) {
    throw ValidationError("density matrix is not positive semidefinite (min "
                          "eigenvalue " + std::to_string(values.minCoeff()) + ")");
  }
  FnoSelection out;
  out.rotation = vectors.leftCols(n_keep);
  out.occupations = values.head(n_keep);
  return out;
}

Eigen::MatrixXd lowdin(const Eigen::MatrixXd& overlap, double min_eigenvalue) {
  if (overlap.rows() != overlap.cols()) {
    throw DimensionError("overlap matrix must be square");
  }
  if ((overlap - overlap.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("overlap matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(overlap);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev <= min_eigenvalue) {
    throw ConditioningError("overlap matrix is near-singular (min eigenvalue " +
                            std::to_string(min_ev) + ")");
  }
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace protonpipe
