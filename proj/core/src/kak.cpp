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

#include "protonpipe/kak.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "protonpipe/errors.hpp"

namespace protonpipe {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix4cd magic_basis() {
  Eigen::Matrix4cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << Complex{s, 0}, 0, 0, Complex{0, s},
       0, Complex{0, s}, Complex{s, 0}, 0,
       0, Complex{0, s}, Complex{-s, 0}, 0,
       Complex{s, 0}, 0, 0, Complex{0, -s};
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& hi, const Eigen::Matrix2cd& lo) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = hi(i, j) * lo;
  return out;
}

Eigen::Matrix2cd pauli2(char letter) {
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Diagonal signs of XX, YY, ZZ in the magic basis, plus the inverse of the
// [sXX sYY sZZ 1] solve matrix.
struct MagicTables {
  Eigen::Matrix4cd m;
  Eigen::Vector4d sxx, syy, szz;
  Eigen::Matrix4d solve_inverse;
};

const MagicTables& magic_tables() {
  static const MagicTables tables = [] {
    MagicTables t;
    t.m = magic_basis();
    auto diag_signs = [&](char letter) {
      const Eigen::Matrix4cd p = kron2(pauli2(letter), pauli2(letter));
      const Eigen::Matrix4cd d = t.m.adjoint() * p * t.m;
      Eigen::Vector4d out;
      for (int k = 0; k < 4; ++k) out(k) = d(k, k).real();
      return out;
    };
    t.sxx = diag_signs('X');
    t.syy = diag_signs('Y');
    t.szz = diag_signs('Z');
    Eigen::Matrix4d s;
    s.col(0) = t.sxx;
    s.col(1) = t.syy;
    s.col(2) = t.szz;
    s.col(3).setOnes();
    t.solve_inverse = s.inverse();
    return t;
  }();
  return tables;
}

// Common eigenbasis of the commuting real symmetric parts of a symmetric
// unitary. Columns are sorted by descending eigenphase. A refinement pass
// resolves near-degenerate eigenphase clusters: after rotating the cluster
// block by its mean phase, the degeneracy-lifting generator sits in the
// imaginary part as a real symmetric matrix.
Eigen::Matrix4d joint_real_eigenbasis(const Eigen::Matrix4cd& gamma) {
  const Eigen::Matrix4d re = gamma.real();
  const Eigen::Matrix4d im = gamma.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(re);
  Eigen::Matrix4d q = es.eigenvectors();

  int start = 0;
  while (start < 4) {
    int end = start + 1;
    while (end < 4 &&
           std::abs(es.eigenvalues()(end) - es.eigenvalues()(start)) < 1e-7) {
      ++end;
    }
    const int width = end - start;
    if (width > 1) {
      const Eigen::MatrixXd sub = q.middleCols(start, width);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sub_es(
          sub.transpose() * im * sub);
      q.middleCols(start, width) = sub * sub_es.eigenvectors();
    }
    start = end;
  }

  auto phase_of = [&](int k) {
    const Complex lambda = (q.col(k).transpose() * gamma * q.col(k))(0);
    return std::arg(lambda);
  };

  // Refinement over eigenphase clusters.
  {
    std::vector<int> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return phase_of(a) < phase_of(b); });
    Eigen::Matrix4d arranged;
    for (int k = 0; k < 4; ++k) arranged.col(k) = q.col(order[k]);
    q = arranged;
    int begin = 0;
    while (begin < 4) {
      int end = begin + 1;
      while (end < 4 && std::abs(phase_of(end) - phase_of(begin)) < 1e-6) ++end;
      const int width = end - begin;
      if (width > 1) {
        const Eigen::MatrixXd sub = q.middleCols(begin, width);
        const Eigen::MatrixXcd block =
            sub.transpose().cast<Complex>() * gamma * sub.cast<Complex>();
        double mean = 0.0;
        for (int k = begin; k < end; ++k) mean += phase_of(k);
        mean /= width;
        const Eigen::MatrixXcd rotated =
            std::exp(Complex{0.0, -mean}) * block;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lift(
            Eigen::MatrixXd(rotated.imag()));
        q.middleCols(begin, width) = sub * lift.eigenvectors();
      }
      begin = end;
    }
  }

  // Deterministic order and sign.
  std::vector<int> order{0, 1, 2, 3};
  Eigen::Vector4d phases;
  for (int k = 0; k < 4; ++k) phases(k) = phase_of(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return phases(a) > phases(b); });
  Eigen::Matrix4d sorted;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d col = q.col(order[k]);
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0) col = -col;
    sorted.col(k) = col;
  }
  if (sorted.determinant() < 0) sorted.col(3) = -sorted.col(3);
  return sorted;
}

struct Su2Pair {
  Eigen::Matrix2cd hi, lo;
  Complex phase;
  double residual;
};

// Factors K ~ phase * kron(hi, lo) with hi, lo in SU(2).
Su2Pair factor_su2_pair(const Eigen::Matrix4cd& k) {
  Su2Pair out;
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double norm = k.block<2, 2>(2 * i, 2 * j).norm();
      if (norm > best) {
        best = norm;
        bi = i;
        bj = j;
      }
    }
  const Eigen::Matrix2cd block = k.block<2, 2>(2 * bi, 2 * bj);
  const Complex det_block = block.determinant();
  out.lo = block / std::sqrt(det_block);
  Eigen::Matrix2cd hi_raw;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      hi_raw(i, j) = (out.lo.adjoint() * k.block<2, 2>(2 * i, 2 * j)).trace() / 2.0;
    }
  const Complex det_hi = hi_raw.determinant();
  const Complex s = std::sqrt(det_hi);
  out.hi = hi_raw / s;
  out.phase = s;
  out.residual = (k - s * kron2(out.hi, out.lo)).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace

Eigen::Matrix4cd canonical_gate(double x, double y, double z) {
  auto axis = [](char letter, double angle) {
    const Eigen::Matrix4cd pp = kron2(pauli2(letter), pauli2(letter));
    return Eigen::Matrix4cd(std::cos(angle) * Eigen::Matrix4cd::Identity() +
                            kI * std::sin(angle) * pp);
  };
  return axis('X', x) * axis('Y', y) * axis('Z', z);
}

KakDecomposition kak_decompose(const Eigen::Matrix4cd& u_in) {
  const Eigen::Matrix4cd defect = u_in * u_in.adjoint() - Eigen::Matrix4cd::Identity();
  if (defect.cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("kak_decompose: input is not unitary");
  }
  const MagicTables& t = magic_tables();

  KakDecomposition out;
  const Complex det = u_in.determinant();
  const Complex root = std::pow(det, 0.25);
  Eigen::Matrix4cd u = u_in / root;
  out.phase = root;

  const Eigen::Matrix4cd m = t.m.adjoint() * u * t.m;
  const Eigen::Matrix4cd gamma = m.transpose() * m;
  const Eigen::Matrix4d q = joint_real_eigenbasis(gamma);

  Eigen::Vector4d theta;
  for (int k = 0; k < 4; ++k) {
    const Complex lambda = (q.col(k).transpose() * gamma * q.col(k))(0);
    theta(k) = 0.5 * std::arg(lambda);
  }

  auto build_a = [&](const Eigen::Vector4d& th) {
    Eigen::Matrix4cd phases = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k) phases(k, k) = std::exp(-kI * th(k));
    return Eigen::Matrix4cd(m * q.cast<Complex>() * phases);
  };
  Eigen::Matrix4cd a = build_a(theta);
  if (a.determinant().real() < 0.0) {
    theta(0) += M_PI;
    a = build_a(theta);
  }
  if (a.imag().cwiseAbs().maxCoeff() > 1e-7) {
    throw Error("kak_decompose: orthogonal factor is not real");
  }

  const Eigen::Vector4d coeffs = t.solve_inverse * theta;
  out.x = coeffs(0);
  out.y = coeffs(1);
  out.z = coeffs(2);
  out.phase *= std::exp(kI * coeffs(3));

  const Eigen::Matrix4cd k1 = t.m * a * t.m.adjoint();
  const Eigen::Matrix4cd k2 =
      t.m * q.transpose().cast<Complex>() * t.m.adjoint();
  const Su2Pair p1 = factor_su2_pair(k1);
  const Su2Pair p2 = factor_su2_pair(k2);
  if (p1.residual > 1e-7 || p2.residual > 1e-7) {
    throw Error("kak_decompose: local factorization failed");
  }
  out.k1_hi = p1.hi;
  out.k1_lo = p1.lo;
  out.k2_hi = p2.hi;
  out.k2_lo = p2.lo;
  out.phase *= p1.phase * p2.phase;
  return out;
}

Eigen::Matrix4cd kak_reconstruct(const KakDecomposition& kak) {
  return kak.phase * kron2(kak.k1_hi, kak.k1_lo) *
         canonical_gate(kak.x, kak.y, kak.z) * kron2(kak.k2_hi, kak.k2_lo);
}

std::array<double, 3> euler_zyz(const Eigen::Matrix2cd& u) {
  const Eigen::Matrix2cd su = u / std::sqrt(u.determinant());
  const double abs00 = std::abs(su(0, 0));
  const double abs10 = std::abs(su(1, 0));
  const double beta = 2.0 * std::atan2(abs10, abs00);
  double alpha = 0.0, gamma = 0.0;
  if (abs10 < 1e-12) {
    alpha = -2.0 * std::arg(su(0, 0));
  } else if (abs00 < 1e-12) {
    alpha = 2.0 * std::arg(su(1, 0));
  } else {
    const double sum = -2.0 * std::arg(su(0, 0));
    const double diff = 2.0 * std::arg(su(1, 0));
    alpha = (sum + diff) / 2.0;
    gamma = (sum - diff) / 2.0;
  }
  return {alpha, beta, gamma};
}

void append_1q_unitary(Circuit& c, std::size_t qubit,
                       const Eigen::Matrix2cd& u) {
  const auto [alpha, beta, gamma] = euler_zyz(u);
  if (std::abs(gamma) > 1e-12) c.rz(qubit, gamma);
  if (std::abs(beta) > 1e-12) c.ry(qubit, beta);
  if (std::abs(alpha) > 1e-12) c.rz(qubit, alpha);
}

namespace {

// Three-CX circuit locally equivalent to exp(i(x XX + y YY + z ZZ)) for
// every coordinate triple (the Vidal-Dawson-style canonical template).
Circuit canonical_template(double x, double y, double z) {
  Circuit c(2);
  c.cx(0, 1);
  c.rz(1, -2.0 * x - M_PI / 2.0);
  c.ry(0, -2.0 * y - M_PI / 2.0);
  c.cx(1, 0);
  c.ry(0, 2.0 * z - M_PI / 2.0);
  c.cx(0, 1);
  return c;
}

void append_template_mapped(Circuit& out, const Circuit& tpl, std::size_t q_lo,
                            std::size_t q_hi) {
  auto mapped = [&](std::size_t q) { return q == 0 ? q_lo : q_hi; };
  for (const auto& g : tpl.gates()) {
    switch (g.kind) {
      case GateKind::RX: out.rx(mapped(g.qubits[0]), g.angle); break;
      case GateKind::RY: out.ry(mapped(g.qubits[0]), g.angle); break;
      case GateKind::RZ: out.rz(mapped(g.qubits[0]), g.angle); break;
      case GateKind::CX: {
        // Native CZ form: CX(c,t) = H(t) CZ H(t).
        const std::size_t target = mapped(g.qubits[1]);
        out.h(target);
        out.cz(mapped(g.qubits[0]), target);
        out.h(target);
        break;
      }
      default:
        throw Error("unexpected gate in synthesis template");
    }
  }
}

double phase_free_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Complex tr = (a.adjoint() * b).trace();
  if (std::abs(tr) < 1e-12) return (a - b).cwiseAbs().maxCoeff();
  return (a * (tr / std::abs(tr)) - b).cwiseAbs().maxCoeff();
}

// ----- canonical-representative alignment ---------------------------------
//
// Canonical coordinates are only defined up to a finite move group: per-axis
// shifts by pi/2 (absorbing i P(x)P), paired sign flips (conjugation by
// Q(x)I), and axis permutations (conjugation by Clifford pairs). A reduced
// representative carries the exact local dressing:
//   C(a) = left * C(coords) * right.
struct ReducedCanonical {
  Eigen::Vector3d coords;
  Eigen::Matrix4cd left;
  Eigen::Matrix4cd right;
};

// Per-axis shift into [0, pi/2): C(a) = C(a') * prod_j (i P_j(x)P_j)^{s_j}.
ReducedCanonical shift_reduce(const Eigen::Vector3d& a) {
  static const char axes[3] = {'X', 'Y', 'Z'};
  ReducedCanonical out{a, Eigen::Matrix4cd::Identity(),
                       Eigen::Matrix4cd::Identity()};
  for (int j = 0; j < 3; ++j) {
    const double step = M_PI / 2.0;
    const long s = static_cast<long>(std::floor(out.coords(j) / step));
    if (s == 0) continue;
    out.coords(j) -= static_cast<double>(s) * step;
    const Eigen::Matrix4cd pp = kron2(pauli2(axes[j]), pauli2(axes[j]));
    Eigen::Matrix4cd factor = Eigen::Matrix4cd::Identity();
    // (i * PP)^s, with s possibly negative.
    const long mod4 = ((s % 4) + 4) % 4;
    for (long k = 0; k < mod4; ++k) factor = kI * pp * factor;
    out.right = factor * out.right;
  }
  return out;
}

void apply_pair_flip(ReducedCanonical& r, int fixed_axis) {
  static const char axes[3] = {'X', 'Y', 'Z'};
  // Conjugation by Q(x)I with Q = pauli(fixed_axis) negates the other two.
  const Eigen::Matrix4cd q =
      kron2(Eigen::Matrix2cd::Identity(), pauli2(axes[fixed_axis]));
  for (int j = 0; j < 3; ++j) {
    if (j != fixed_axis) r.coords(j) = -r.coords(j);
  }
  r.left = r.left * q;
  r.right = q * r.right;
}

void apply_transposition(ReducedCanonical& r, int axis_a, int axis_b) {
  // Clifford W with (W(x)W) C(a) (W(x)W)^+ = C(a with axes swapped):
  //   swap x,y: S; swap x,z: H; swap y,z: e^{-i pi X / 4}.
  Eigen::Matrix2cd w;
  const int lo = std::min(axis_a, axis_b), hi = std::max(axis_a, axis_b);
  if (lo == 0 && hi == 1) {
    w << 1, 0, 0, kI;
  } else if (lo == 0 && hi == 2) {
    w << 1, 1, 1, -1;
    w /= std::sqrt(2.0);
  } else {
    const double s = 1.0 / std::sqrt(2.0);
    w << Complex{s, 0}, Complex{0, -s}, Complex{0, -s}, Complex{s, 0};
  }
  const Eigen::Matrix4cd ww = kron2(w, w);
  std::swap(r.coords(axis_a), r.coords(axis_b));
  // C(old) = WW^+ C(new) WW.
  r.left = r.left * ww.adjoint();
  r.right = ww * r.right;
}

// All reduced representatives reachable by perms x paired flips x shifts.
std::vector<ReducedCanonical> reduced_variants(const Eigen::Vector3d& a) {
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<ReducedCanonical> out;
  const ReducedCanonical base = shift_reduce(a);
  for (const auto& perm : perms) {
    for (int flip = -1; flip < 3; ++flip) {  // -1: none; else fixed axis
      ReducedCanonical r = base;
      // Apply the permutation as a sequence of transpositions.
      int order[3] = {perm[0], perm[1], perm[2]};
      // Selection "sort" with explicit transpositions on r.
      int current[3] = {0, 1, 2};
      for (int pos = 0; pos < 3; ++pos) {
        int want = order[pos];
        int at = pos;
        for (int k = pos; k < 3; ++k) {
          if (current[k] == want) at = k;
        }
        if (at != pos) {
          apply_transposition(r, pos, at);
          std::swap(current[pos], current[at]);
        }
      }
      if (flip >= 0) apply_pair_flip(r, flip);
      // Re-shift into [0, pi/2) after flips/permutations.
      const ReducedCanonical again = shift_reduce(r.coords);
      r.coords = again.coords;
      r.left = r.left * again.left;
      r.right = again.right * r.right;
      // Near-boundary branch: coordinates within noise of pi/2 also admit
      // the representative shifted down to ~0.
      const ReducedCanonical added = r;
      out.push_back(std::move(r));
      for (int j = 0; j < 3; ++j) {
        if (added.coords(j) > M_PI / 2.0 - 1e-6) {
          ReducedCanonical branch = added;
          branch.coords(j) -= M_PI / 2.0;
          const Eigen::Matrix4cd pp = kron2(pauli2("XYZ"[j]), pauli2("XYZ"[j]));
          branch.right = (kI * pp) * branch.right;
          out.push_back(std::move(branch));
        }
      }
    }
  }
  return out;
}

struct LocalPair {
  Eigen::Matrix2cd hi, lo;
};

// Factors a kron-product matrix into SU(2) locals (phase discarded).
LocalPair split_locals(const Eigen::Matrix4cd& k) {
  const Su2Pair pair = factor_su2_pair(k);
  if (pair.residual > 1e-7) {
    throw Error("synthesis alignment produced a non-local factor");
  }
  return {pair.hi, pair.lo};
}

}  // namespace

Circuit two_qubit_block_circuit(const Eigen::Matrix4cd& u, std::size_t q_lo,
                                std::size_t q_hi, std::size_t n_qubits) {
  if (q_lo >= n_qubits || q_hi >= n_qubits || q_lo == q_hi) {
    throw ValidationError("invalid block qubits");
  }

  // Product states need no entangler.
  {
    const Su2Pair direct = factor_su2_pair(u);
    if (direct.residual < 1e-10) {
      Circuit c(n_qubits);
      append_1q_unitary(c, q_lo, direct.lo);
      append_1q_unitary(c, q_hi, direct.hi);
      return c;
    }
  }

  const KakDecomposition ku = kak_decompose(u);
  const Eigen::Matrix4cd k1u = kron2(ku.k1_hi, ku.k1_lo);
  const Eigen::Matrix4cd k2u = kron2(ku.k2_hi, ku.k2_lo);
  const std::vector<ReducedCanonical> u_variants =
      reduced_variants({ku.x, ku.y, ku.z});

  const Circuit tpl = canonical_template(ku.x, ku.y, ku.z);
  const KakDecomposition kt = kak_decompose(tpl.to_unitary());
  const Eigen::Matrix4cd k1t = kron2(kt.k1_hi, kt.k1_lo);
  const Eigen::Matrix4cd k2t = kron2(kt.k2_hi, kt.k2_lo);
  const std::vector<ReducedCanonical> t_variants =
      reduced_variants({kt.x, kt.y, kt.z});

  for (const ReducedCanonical& ru : u_variants) {
    for (const ReducedCanonical& rt : t_variants) {
      if ((ru.coords - rt.coords).cwiseAbs().maxCoeff() > 1e-6) continue;
      // u   = pU k1u [ru.left C(r) ru.right] k2u
      // tpl = pT k1t [rt.left C(r) rt.right] k2t
      //   =>  u ~ (k1u ru.left rt.left^+ k1t^+) tpl (k2t^+ rt.right^+ ru.right k2u)
      const LocalPair before = split_locals(Eigen::Matrix4cd(
          k2t.adjoint() * rt.right.adjoint() * ru.right * k2u));
      const LocalPair after = split_locals(Eigen::Matrix4cd(
          k1u * ru.left * rt.left.adjoint() * k1t.adjoint()));

      Circuit check(2);
      append_1q_unitary(check, 0, before.lo);
      append_1q_unitary(check, 1, before.hi);
      append_template_mapped(check, tpl, 0, 1);
      append_1q_unitary(check, 0, after.lo);
      append_1q_unitary(check, 1, after.hi);
      if (phase_free_distance(check.to_unitary(), u) > 1e-9) continue;

      Circuit c(n_qubits);
      append_1q_unitary(c, q_lo, before.lo);
      append_1q_unitary(c, q_hi, before.hi);
      append_template_mapped(c, tpl, q_lo, q_hi);
      append_1q_unitary(c, q_lo, after.lo);
      append_1q_unitary(c, q_hi, after.hi);
      return c;
    }
  }
  throw Error("two-qubit block synthesis failed to converge");
}

}  // namespace protonpipe
