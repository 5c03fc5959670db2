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
#include <set>
#include <string>
#include <vector>

#include "protonpipe/pauli.hpp"

namespace protonpipe {

/// Two-species mode set: electron spin orbitals first, proton spin orbitals
/// after. The Jordan-Wigner qubit index equals the global mode index.
struct ModeLayout {
  std::size_t n_electron_modes = 0;
  std::size_t n_proton_modes = 0;

  std::size_t total_modes() const { return n_electron_modes + n_proton_modes; }
  bool is_electron(std::size_t mode) const { return mode < n_electron_modes; }
  /// Global mode index of proton spin orbital P (species-local index).
  std::size_t proton_mode(std::size_t p) const { return n_electron_modes + p; }
};

/// One ladder operator: a_mode or a^dagger_mode.
struct LadderOp {
  std::size_t mode;
  bool creation;
};

/// coefficient * product of ladder operators, in written (left-to-right)
/// operator order. No normal ordering is assumed.
struct FermionTerm {
  Complex coefficient{1.0, 0.0};
  std::vector<LadderOp> ops;
};

/// Sum of FermionTerms.
struct FermionOp {
  std::vector<FermionTerm> terms;

  FermionOp& add(Complex coeff, std::vector<LadderOp> ops);
  FermionOp adjoint() const;
};

/// Standard Jordan-Wigner image: a_j -> (X_j + iY_j)/2 * Z-string on modes
/// below j. Result is canonical on layout.total_modes() qubits.
PauliSum jordan_wigner(const FermionTerm& term, const ModeLayout& layout);
PauliSum jordan_wigner(const FermionOp& op, const ModeLayout& layout);

/// One anti-Hermitian excitation generator tau = T - T^dagger.
struct PoolElement {
  std::string label;
  FermionOp op;
};

struct ExcitationPool {
  std::vector<PoolElement> elements;
  std::vector<std::string> warnings;  // blocks omitted for empty index sets
};

/// All singles and doubles within each species plus mixed electron-proton
/// doubles, enumerated in a fixed lexicographic order. Occupied sets use
/// species-local indices; virtuals are their in-species complements. Blocks
/// whose occupied or virtual set is empty are omitted with a warning.
ExcitationPool excitation_pool(const ModeLayout& layout,
                               const std::set<std::size_t>& occupied_e,
                               const std::set<std::size_t>& occupied_p);

/// Splits JW-mapped pool elements into de-duplicated individual strings
/// (coefficients dropped; odd-Y strings kept as generators iP). First
/// occurrence order is preserved.
std::vector<PauliString> qubit_pool(const std::vector<PauliSum>& jw_pool);

/// JW image of the species number operator sum_p a^dag_p a_p.
PauliSum number_operator(const ModeLayout& layout, bool electron_species);

}  // namespace protonpipe
