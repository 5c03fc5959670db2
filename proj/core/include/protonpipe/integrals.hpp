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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protonpipe/fermion.hpp"

namespace protonpipe {

/// Second-quantized coefficients of the two-species Hamiltonian, in Hartree.
/// The electronic two-body tensor is always stored in physicists' convention
/// <pq|rs>; v_pq absorbs the protonic kinetic matrix elements.
struct NeoIntegrals {
  ModeLayout layout;
  Eigen::MatrixXd h1e;          // h_pq, electronic one-body
  std::vector<double> h2e;      // <pq|rs>, size nE^4
  Eigen::MatrixXd v1p;          // v_PQ (incl. T_p), protonic one-body
  std::vector<double> gep;      // g_PQpq, size nP^2 * nE^2
  double e_core = 0.0;

  double h2(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const;
  double g(std::size_t P, std::size_t Q, std::size_t p, std::size_t q) const;
  void set_h2(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
              double value);
  void set_g(std::size_t P, std::size_t Q, std::size_t p, std::size_t q,
             double value);

  static NeoIntegrals zero(const ModeLayout& layout);

  /// Validates Hermiticity and the declared index symmetries within tol.
  void validate(double tol = 1e-10) const;
};

/// Reads the NEO-FCIDUMP text format:
///   &NEO NELEC_MODES=<n> NPROT_MODES=<n> CONV=PHYS|CHEM ECORE=<x>
/// followed by labeled blocks E1, E2, P1, EP with `value i j [k l]` rows
/// (1-based indices, `#` comments). CHEM two-body entries (pq|rs) are
/// converted to <pr|qs> on load; symmetry-equivalent slots are filled in and
/// conflicting duplicates rejected.
NeoIntegrals parse_integrals(std::istream& in);
NeoIntegrals parse_integrals_file(const std::string& path);

/// Emits the canonical form (CONV=PHYS, unique symmetry representatives).
/// write -> parse is the identity.
void write_integrals(const NeoIntegrals& ints, std::ostream& out);
void write_integrals_file(const NeoIntegrals& ints, const std::string& path);

}  // namespace protonpipe
