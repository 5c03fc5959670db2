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

#include "protonpipe/fermion.hpp"

#include <algorithm>
#include <unordered_set>

#include "protonpipe/errors.hpp"

namespace protonpipe {

FermionOp& FermionOp::add(Complex coeff, std::vector<LadderOp> ops) {
  terms.push_back(FermionTerm{coeff, std::move(ops)});
  return *this;
}

FermionOp FermionOp::adjoint() const {
  FermionOp out;
  out.terms.reserve(terms.size());
  for (const auto& t : terms) {
    FermionTerm a;
    a.coefficient = std::conj(t.coefficient);
    a.ops.assign(t.ops.rbegin(), t.ops.rend());
    for (auto& op : a.ops) op.creation = !op.creation;
    out.terms.push_back(std::move(a));
  }
  return out;
}

namespace {

// (X_j -+ iY_j)/2 with the JW Z-string on modes < j.
PauliSum ladder_sum(const LadderOp& op, std::size_t n_modes) {
  if (op.mode >= n_modes) {
    throw ValidationError("mode index " + std::to_string(op.mode) +
                          " out of bounds for " + std::to_string(n_modes) +
                          " modes");
  }
  PauliString x(n_modes), y(n_modes);
  for (std::size_t k = 0; k < op.mode; ++k) {
    x.set_letter(k, 'Z');
    y.set_letter(k, 'Z');
  }
  x.set_letter(op.mode, 'X');
  y.set_letter(op.mode, 'Y');
  PauliSum s(n_modes);
  s.add_term(x, 0.5);
  s.add_term(y, op.creation ? Complex{0.0, -0.5} : Complex{0.0, 0.5});
  return s;
}

}  // namespace

PauliSum jordan_wigner(const FermionTerm& term, const ModeLayout& layout) {
  const std::size_t n = layout.total_modes();
  PauliSum acc = PauliSum::identity(n, term.coefficient);
  for (const auto& op : term.ops) {
    acc = acc * ladder_sum(op, n);
  }
  return acc;
}

PauliSum jordan_wigner(const FermionOp& op, const ModeLayout& layout) {
  PauliSum acc(layout.total_modes());
  for (const auto& term : op.terms) {
    acc = add_scaled(acc, 1.0, jordan_wigner(term, layout));
  }
  return acc;
}

namespace {

std::vector<std::size_t> complement(std::size_t count,
                                    const std::set<std::size_t>& occupied) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < count; ++k) {
    if (!occupied.count(k)) out.push_back(k);
  }
  return out;
}

void check_bounds(const std::set<std::size_t>& occupied, std::size_t count,
                  const char* species) {
  for (std::size_t k : occupied) {
    if (k >= count) {
      throw ValidationError(std::string("occupied ") + species + " index " +
                            std::to_string(k) + " out of bounds");
    }
  }
}

// tau = a^dag_to a_from - h.c. (global mode indices).
PoolElement single_excitation(const std::string& label, std::size_t from,
                              std::size_t to) {
  PoolElement e;
  e.label = label;
  e.op.add(1.0, {{to, true}, {from, false}});
  e.op.add(-1.0, {{from, true}, {to, false}});
  return e;
}

// tau = a^dag_a a^dag_b a_j a_i - h.c. (global mode indices).
PoolElement double_excitation(const std::string& label, std::size_t i,
                              std::size_t j, std::size_t a, std::size_t b) {
  PoolElement e;
  e.label = label;
  e.op.add(1.0, {{a, true}, {b, true}, {j, false}, {i, false}});
  e.op.add(-1.0, {{i, true}, {j, true}, {b, false}, {a, false}});
  return e;
}

std::string idx(std::size_t i) { return std::to_string(i); }

}  // namespace

ExcitationPool excitation_pool(const ModeLayout& layout,
                               const std::set<std::size_t>& occupied_e,
                               const std::set<std::size_t>& occupied_p) {
  check_bounds(occupied_e, layout.n_electron_modes, "electron");
  check_bounds(occupied_p, layout.n_proton_modes, "proton");

  const std::vector<std::size_t> occ_e(occupied_e.begin(), occupied_e.end());
  const std::vector<std::size_t> occ_p(occupied_p.begin(), occupied_p.end());
  const std::vector<std::size_t> virt_e =
      complement(layout.n_electron_modes, occupied_e);
  const std::vector<std::size_t> virt_p =
      complement(layout.n_proton_modes, occupied_p);

  ExcitationPool pool;
  const bool have_e = !occ_e.empty() && !virt_e.empty();
  const bool have_p = !occ_p.empty() && !virt_p.empty();
  if (!have_e && layout.n_electron_modes > 0) {
    pool.warnings.push_back("electronic blocks omitted: empty occupied or virtual set");
  }
  if (!have_p && layout.n_proton_modes > 0) {
    pool.warnings.push_back("protonic blocks omitted: empty occupied or virtual set");
  }

  // Electronic singles.
  if (have_e) {
    for (std::size_t i : occ_e)
      for (std::size_t a : virt_e)
        pool.elements.push_back(
            single_excitation("e " + idx(i) + "->" + idx(a), i, a));
  }
  // Protonic singles (global indices).
  if (have_p) {
    for (std::size_t i : occ_p)
      for (std::size_t a : virt_p)
        pool.elements.push_back(single_excitation("p " + idx(i) + "->" + idx(a),
                                                  layout.proton_mode(i),
                                                  layout.proton_mode(a)));
  }
  // Electronic doubles: i<j occupied, a<b virtual.
  if (have_e && occ_e.size() >= 2 && virt_e.size() >= 2) {
    for (std::size_t ii = 0; ii < occ_e.size(); ++ii)
      for (std::size_t jj = ii + 1; jj < occ_e.size(); ++jj)
        for (std::size_t aa = 0; aa < virt_e.size(); ++aa)
          for (std::size_t bb = aa + 1; bb < virt_e.size(); ++bb)
            pool.elements.push_back(double_excitation(
                "ee " + idx(occ_e[ii]) + "," + idx(occ_e[jj]) + "->" +
                    idx(virt_e[aa]) + "," + idx(virt_e[bb]),
                occ_e[ii], occ_e[jj], virt_e[aa], virt_e[bb]));
  }
  // Protonic doubles.
  if (have_p && occ_p.size() >= 2 && virt_p.size() >= 2) {
    for (std::size_t ii = 0; ii < occ_p.size(); ++ii)
      for (std::size_t jj = ii + 1; jj < occ_p.size(); ++jj)
        for (std::size_t aa = 0; aa < virt_p.size(); ++aa)
          for (std::size_t bb = aa + 1; bb < virt_p.size(); ++bb)
            pool.elements.push_back(double_excitation(
                "pp " + idx(occ_p[ii]) + "," + idx(occ_p[jj]) + "->" +
                    idx(virt_p[aa]) + "," + idx(virt_p[bb]),
                layout.proton_mode(occ_p[ii]), layout.proton_mode(occ_p[jj]),
                layout.proton_mode(virt_p[aa]), layout.proton_mode(virt_p[bb])));
  }
  // Mixed electron-proton doubles: tau = a^dag_a a^dag_A a_i a_I - h.c.
  if (have_e && have_p) {
    for (std::size_t i : occ_e)
      for (std::size_t a : virt_e)
        for (std::size_t I : occ_p)
          for (std::size_t A : virt_p) {
            PoolElement e;
            e.label = "ep " + idx(i) + "->" + idx(a) + " " + idx(I) + "->" + idx(A);
            const std::size_t gI = layout.proton_mode(I);
            const std::size_t gA = layout.proton_mode(A);
            e.op.add(1.0, {{a, true}, {gA, true}, {i, false}, {gI, false}});
            e.op.add(-1.0, {{gI, true}, {i, true}, {gA, false}, {a, false}});
            pool.elements.push_back(std::move(e));
          }
  }
  return pool;
}

std::vector<PauliString> qubit_pool(const std::vector<PauliSum>& jw_pool) {
  std::vector<PauliString> out;
  std::unordered_set<std::string> seen;
  for (const auto& sum : jw_pool) {
    for (const auto& [letters, coeff] : sum.terms()) {
      (void)coeff;
      const PauliString p(letters);
      if (p.y_count() % 2 == 0) continue;  // not an anti-Hermitian generator
      if (seen.insert(letters).second) out.push_back(p);
    }
  }
  return out;
}

PauliSum number_operator(const ModeLayout& layout, bool electron_species) {
  FermionOp op;
  const std::size_t begin = electron_species ? 0 : layout.n_electron_modes;
  const std::size_t end =
      electron_species ? layout.n_electron_modes : layout.total_modes();
  for (std::size_t m = begin; m < end; ++m) {
    op.add(1.0, {{m, true}, {m, false}});
  }
  return jordan_wigner(op, layout);
}

}  // namespace protonpipe
