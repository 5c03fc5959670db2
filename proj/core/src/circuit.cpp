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

#include "protonpipe/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "protonpipe/errors.hpp"

namespace protonpipe {

namespace {

constexpr Complex kI{0.0, 1.0};

struct KindInfo {
  const char* name;
  bool two_qubit;
  bool has_angle;
};

const KindInfo kKinds[] = {
    {"RX", false, true},   {"RY", false, true},  {"RZ", false, true},
    {"H", false, false},   {"X", false, false},  {"SX", false, false},
    {"CZ", true, false},   {"CX", true, false},  {"SWAP", true, false},
    {"U2", true, false},   {"MEASURE", false, false},
};

}  // namespace

const char* gate_kind_name(GateKind kind) {
  return kKinds[static_cast<int>(kind)].name;
}

GateKind gate_kind_from_name(const std::string& name) {
  for (std::size_t k = 0; k < std::size(kKinds); ++k) {
    if (name == kKinds[k].name) return static_cast<GateKind>(k);
  }
  throw ValidationError("unknown gate kind `" + name + "`");
}

bool gate_kind_is_two_qubit(GateKind kind) {
  return kKinds[static_cast<int>(kind)].two_qubit;
}

bool gate_kind_has_angle(GateKind kind) {
  return kKinds[static_cast<int>(kind)].has_angle;
}

Gate Gate::inverse() const {
  if (!is_two_qubit()) {
    throw ValidationError("Gate::inverse is only defined for two-qubit gates");
  }
  Gate inv = *this;
  if (kind == GateKind::Unitary2Q) inv.block = block.adjoint();
  // CZ, CX and SWAP are involutions.
  return inv;
}

Eigen::Matrix2cd gate_matrix_1q(const Gate& g) {
  Eigen::Matrix2cd m;
  const double half = g.angle / 2.0;
  switch (g.kind) {
    case GateKind::RX:
      m << std::cos(half), -kI * std::sin(half), -kI * std::sin(half),
          std::cos(half);
      return m;
    case GateKind::RY:
      m << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
      return m;
    case GateKind::RZ:
      m << std::exp(-kI * half), 0, 0, std::exp(kI * half);
      return m;
    case GateKind::H:
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::SX:
      m << Complex{0.5, 0.5}, Complex{0.5, -0.5}, Complex{0.5, -0.5},
          Complex{0.5, 0.5};
      return m;
    default:
      throw ValidationError(std::string("gate ") + gate_kind_name(g.kind) +
                            " has no 1q matrix");
  }
}

Eigen::Matrix4cd gate_matrix_2q(const Gate& g) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  switch (g.kind) {
    case GateKind::CZ:
      m(3, 3) = -1.0;
      return m;
    case GateKind::CX:
      // control = qubits[0] = low bit of the local index.
      m.setZero();
      m(0, 0) = 1.0;
      m(2, 2) = 1.0;
      m(1, 3) = 1.0;
      m(3, 1) = 1.0;
      return m;
    case GateKind::SWAP:
      m.setZero();
      m(0, 0) = 1.0;
      m(1, 2) = 1.0;
      m(2, 1) = 1.0;
      m(3, 3) = 1.0;
      return m;
    case GateKind::Unitary2Q:
      return g.block;
    default:
      throw ValidationError(std::string("gate ") + gate_kind_name(g.kind) +
                            " has no 2q matrix");
  }
}

void Circuit::append(Gate g) {
  const std::size_t arity = g.arity();
  for (std::size_t k = 0; k < arity; ++k) {
    if (g.qubits[k] >= n_qubits_) {
      throw ValidationError("gate qubit index out of range");
    }
  }
  if (arity == 2 && g.qubits[0] == g.qubits[1]) {
    throw ValidationError("two-qubit gate with identical qubits");
  }
  if (g.kind == GateKind::Unitary2Q) {
    const Eigen::Matrix4cd defect =
        g.block * g.block.adjoint() - Eigen::Matrix4cd::Identity();
    if (defect.cwiseAbs().maxCoeff() > 1e-10) {
      throw ValidationError("two-qubit block is not unitary");
    }
  }
  gates_.push_back(std::move(g));
}

void Circuit::extend(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw DimensionError("cannot extend circuit with a different register");
  }
  for (const auto& g : other.gates_) append(g);
}

Circuit& Circuit::rx(std::size_t q, double angle) {
  append(Gate{GateKind::RX, {q, 0}, angle, {}});
  return *this;
}
Circuit& Circuit::ry(std::size_t q, double angle) {
  append(Gate{GateKind::RY, {q, 0}, angle, {}});
  return *this;
}
Circuit& Circuit::rz(std::size_t q, double angle) {
  append(Gate{GateKind::RZ, {q, 0}, angle, {}});
  return *this;
}
Circuit& Circuit::h(std::size_t q) {
  append(Gate{GateKind::H, {q, 0}, 0.0, {}});
  return *this;
}
Circuit& Circuit::x(std::size_t q) {
  append(Gate{GateKind::X, {q, 0}, 0.0, {}});
  return *this;
}
Circuit& Circuit::sx(std::size_t q) {
  append(Gate{GateKind::SX, {q, 0}, 0.0, {}});
  return *this;
}
Circuit& Circuit::cz(std::size_t a, std::size_t b) {
  append(Gate{GateKind::CZ, {a, b}, 0.0, {}});
  return *this;
}
Circuit& Circuit::cx(std::size_t control, std::size_t target) {
  append(Gate{GateKind::CX, {control, target}, 0.0, {}});
  return *this;
}
Circuit& Circuit::swap(std::size_t a, std::size_t b) {
  append(Gate{GateKind::SWAP, {a, b}, 0.0, {}});
  return *this;
}
Circuit& Circuit::unitary(std::size_t a, std::size_t b,
                          const Eigen::Matrix4cd& block) {
  append(Gate{GateKind::Unitary2Q, {a, b}, 0.0, block});
  return *this;
}
Circuit& Circuit::measure(std::size_t q) {
  append(Gate{GateKind::Measure, {q, 0}, 0.0, {}});
  return *this;
}

void apply_gate(const Gate& g, Eigen::VectorXcd& state) {
  if (g.kind == GateKind::Measure) return;
  const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
  if (!g.is_two_qubit()) {
    const Eigen::Matrix2cd m = gate_matrix_1q(g);
    const std::uint64_t bit = std::uint64_t{1} << g.qubits[0];
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & bit) continue;
      const Complex a0 = state(base);
      const Complex a1 = state(base | bit);
      state(base) = m(0, 0) * a0 + m(0, 1) * a1;
      state(base | bit) = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return;
  }
  const Eigen::Matrix4cd m = gate_matrix_2q(g);
  const std::uint64_t b0 = std::uint64_t{1} << g.qubits[0];
  const std::uint64_t b1 = std::uint64_t{1} << g.qubits[1];
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & (b0 | b1)) continue;
    Eigen::Vector4cd amp{state(base), state(base | b0), state(base | b1),
                         state(base | b0 | b1)};
    amp = m * amp;
    state(base) = amp(0);
    state(base | b0) = amp(1);
    state(base | b1) = amp(2);
    state(base | b0 | b1) = amp(3);
  }
}

Eigen::MatrixXcd Circuit::to_unitary(std::size_t limit) const {
  if (n_qubits_ > limit) {
    throw ResourceError("dense circuit unitary would exceed the configured "
                        "limit of " + std::to_string(limit) + " qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  Eigen::MatrixXcd u(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
    basis(col) = 1.0;
    for (const auto& g : gates_) apply_gate(g, basis);
    u.col(col) = basis;
  }
  return u;
}

std::string Circuit::to_text() const {
  std::string out = "QUBITS " + std::to_string(n_qubits_) + "\n";
  char buf[64];
  for (const auto& g : gates_) {
    out += gate_kind_name(g.kind);
    out += ' ';
    out += std::to_string(g.qubits[0]);
    if (g.is_two_qubit()) out += ',' + std::to_string(g.qubits[1]);
    if (gate_kind_has_angle(g.kind)) {
      std::snprintf(buf, sizeof buf, " %.17g", g.angle);
      out += buf;
    }
    if (g.kind == GateKind::Unitary2Q) {
      for (Eigen::Index r = 0; r < 4; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) {
          std::snprintf(buf, sizeof buf, " %.17g %.17g", g.block(r, c).real(),
                        g.block(r, c).imag());
          out += buf;
        }
    }
    out += '\n';
  }
  return out;
}

Circuit Circuit::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  Circuit c(0);
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind_name;
    ls >> kind_name;
    if (!have_header) {
      std::size_t n = 0;
      if (kind_name != "QUBITS" || !(ls >> n)) {
        throw ParseError("expected `QUBITS <n>` header", lineno);
      }
      c = Circuit(n);
      have_header = true;
      continue;
    }
    const GateKind kind = gate_kind_from_name(kind_name);
    std::string qubits_tok;
    if (!(ls >> qubits_tok)) throw ParseError("missing qubit indices", lineno);
    Gate g{kind, {0, 0}, 0.0, {}};
    const auto comma = qubits_tok.find(',');
    try {
      if (gate_kind_is_two_qubit(kind)) {
        if (comma == std::string::npos) {
          throw ParseError("two-qubit gate needs `q0,q1`", lineno);
        }
        g.qubits[0] = std::stoul(qubits_tok.substr(0, comma));
        g.qubits[1] = std::stoul(qubits_tok.substr(comma + 1));
      } else {
        if (comma != std::string::npos) {
          throw ParseError("single-qubit gate takes one index", lineno);
        }
        g.qubits[0] = std::stoul(qubits_tok);
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("bad qubit index", lineno);
    }
    if (gate_kind_has_angle(kind)) {
      if (!(ls >> g.angle)) throw ParseError("missing rotation angle", lineno);
    }
    if (kind == GateKind::Unitary2Q) {
      for (Eigen::Index r = 0; r < 4; ++r)
        for (Eigen::Index col = 0; col < 4; ++col) {
          double re = 0.0, im = 0.0;
          if (!(ls >> re >> im)) {
            throw ParseError("U2 needs 16 re/im pairs", lineno);
          }
          g.block(r, col) = Complex{re, im};
        }
    }
    c.append(std::move(g));
  }
  if (!have_header) throw ParseError("missing `QUBITS <n>` header", 1);
  return c;
}

Circuit pauli_evolution(const PauliString& generator, double angle,
                        std::string* warning) {
  const std::size_t n = generator.n_qubits();
  Circuit c(n);
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < n; ++q) {
    if (generator.letter(q) != 'I') active.push_back(q);
  }
  if (active.empty()) {
    if (warning) *warning = "identity generator: emitted a no-op circuit";
    return c;
  }
  // Basis changes into Z.
  for (std::size_t q : active) {
    if (generator.letter(q) == 'X') c.h(q);
    if (generator.letter(q) == 'Y') c.rx(q, M_PI / 2.0);
  }
  // CX ladder onto the last active qubit.
  for (std::size_t k = 0; k + 1 < active.size(); ++k) {
    c.cx(active[k], active[k + 1]);
  }
  c.rz(active.back(), angle);
  for (std::size_t k = active.size() - 1; k-- > 0;) {
    c.cx(active[k], active[k + 1]);
  }
  for (std::size_t q : active) {
    if (generator.letter(q) == 'X') c.h(q);
    if (generator.letter(q) == 'Y') c.rx(q, -M_PI / 2.0);
  }
  return c;
}

TwoQubitMetrics two_qubit_metrics(const Circuit& c) {
  TwoQubitMetrics m;
  std::vector<std::size_t> level(c.n_qubits(), 0);
  for (const auto& g : c.gates()) {
    if (!g.is_two_qubit()) continue;
    ++m.count;
    const std::size_t d = std::max(level[g.qubits[0]], level[g.qubits[1]]) + 1;
    level[g.qubits[0]] = d;
    level[g.qubits[1]] = d;
    m.depth = std::max(m.depth, d);
  }
  return m;
}

}  // namespace protonpipe
