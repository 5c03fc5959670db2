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

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protonpipe/pauli.hpp"

namespace protonpipe {

enum class GateKind {
  RX,
  RY,
  RZ,
  H,
  X,
  SX,
  CZ,
  CX,
  SWAP,
  Unitary2Q,  // generic 4x4 block
  Measure,
};

const char* gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);
bool gate_kind_is_two_qubit(GateKind kind);
bool gate_kind_has_angle(GateKind kind);

/// One gate. For two-qubit gates the local 4x4 basis index is
/// bit(qubits[0]) + 2*bit(qubits[1]); CX has control qubits[0].
struct Gate {
  GateKind kind;
  std::array<std::size_t, 2> qubits{0, 0};
  double angle = 0.0;
  Eigen::Matrix4cd block;  // Unitary2Q only

  std::size_t arity() const { return gate_kind_is_two_qubit(kind) ? 2 : 1; }
  bool is_two_qubit() const { return gate_kind_is_two_qubit(kind); }
  /// Inverse of a two-qubit gate (used by gate folding).
  Gate inverse() const;
};

/// 2x2 matrix of a single-qubit gate.
Eigen::Matrix2cd gate_matrix_1q(const Gate& g);
/// 4x4 matrix of a two-qubit gate in the gate-local basis.
Eigen::Matrix4cd gate_matrix_2q(const Gate& g);

/// Ordered gate list over a fixed register.
class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  void append(Gate g);
  void extend(const Circuit& other);

  Circuit& rx(std::size_t q, double angle);
  Circuit& ry(std::size_t q, double angle);
  Circuit& rz(std::size_t q, double angle);
  Circuit& h(std::size_t q);
  Circuit& x(std::size_t q);
  Circuit& sx(std::size_t q);
  Circuit& cz(std::size_t a, std::size_t b);
  Circuit& cx(std::size_t control, std::size_t target);
  Circuit& swap(std::size_t a, std::size_t b);
  Circuit& unitary(std::size_t a, std::size_t b, const Eigen::Matrix4cd& block);
  Circuit& measure(std::size_t q);

  /// Dense unitary of the circuit (measure gates ignored).
  Eigen::MatrixXcd to_unitary(std::size_t limit = kDefaultDenseLimit) const;

  /// One gate per line: `KIND q[,q2] [angle]`. Unitary blocks serialize
  /// their 16 entries as re/im pairs after the qubits.
  std::string to_text() const;
  static Circuit from_text(const std::string& text);

 private:
  std::size_t n_qubits_;
  std::vector<Gate> gates_;
};

/// Applies one gate in place to a statevector (measure gates are no-ops).
void apply_gate(const Gate& g, Eigen::VectorXcd& state);

/// Circuit for exp(-i angle/2 * P) via basis changes, a CX ladder, and one
/// RZ. The generator's stored phase is ignored; it must be +1. An identity
/// generator yields an empty circuit (and sets *warning when given).
Circuit pauli_evolution(const PauliString& generator, double angle,
                        std::string* warning = nullptr);

/// Two-qubit gate count and qubit-sharing dependency depth (single-qubit
/// gates are free; measurements excluded).
struct TwoQubitMetrics {
  std::size_t count = 0;
  std::size_t depth = 0;
};
TwoQubitMetrics two_qubit_metrics(const Circuit& c);

}  // namespace protonpipe
