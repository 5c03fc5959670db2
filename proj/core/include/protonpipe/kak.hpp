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

#include <Eigen/Dense>

#include "protonpipe/circuit.hpp"

namespace protonpipe {

/// Cartan form of a two-qubit unitary:
///   U = phase * kron(k1_hi, k1_lo) * exp(i(x XX + y YY + z ZZ))
///             * kron(k2_hi, k2_lo)
/// where the low factor acts on the low bit of the 4x4 basis index. The
/// canonical coordinates are a deterministic representative, not reduced to
/// the Weyl chamber.
struct KakDecomposition {
  Eigen::Matrix2cd k1_hi, k1_lo;
  Eigen::Matrix2cd k2_hi, k2_lo;
  double x = 0.0, y = 0.0, z = 0.0;
  Complex phase{1.0, 0.0};
};

KakDecomposition kak_decompose(const Eigen::Matrix4cd& u);

/// exp(i(x XX + y YY + z ZZ)) from the closed commuting-factor form.
Eigen::Matrix4cd canonical_gate(double x, double y, double z);

Eigen::Matrix4cd kak_reconstruct(const KakDecomposition& kak);

/// Euler angles with u = e^{i phi} RZ(alpha) RY(beta) RZ(gamma); returns
/// {alpha, beta, gamma} (the phase is discarded).
std::array<double, 3> euler_zyz(const Eigen::Matrix2cd& u);

/// Appends u = e^{i phi} RZ(a) RY(b) RZ(c) to the circuit as rotations
/// (angles below 1e-12 dropped; the phase is discarded).
void append_1q_unitary(Circuit& c, std::size_t qubit,
                       const Eigen::Matrix2cd& u);

/// Circuit over `n_qubits` implementing `u` on (q_lo, q_hi) up to global
/// phase, using single-qubit rotations and at most 3 CZ gates.
Circuit two_qubit_block_circuit(const Eigen::Matrix4cd& u, std::size_t q_lo,
                                std::size_t q_hi, std::size_t n_qubits);

}  // namespace protonpipe
