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

#include "protonpipe/pauli.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "protonpipe/errors.hpp"

namespace protonpipe {

namespace {

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

int letter_index(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
  }
}

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

// product_letter[a][b] and product_phase[a][b] encode P_a * P_b = i^phase P_c.
constexpr int kProductLetter[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
constexpr unsigned kProductPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},  // X*Y = iZ, X*Z = -iY
    {0, 3, 0, 1},  // Y*X = -iZ, Y*Z = iX
    {0, 1, 3, 0},  // Z*X = iY, Z*Y = -iX
};

Complex phase_value(unsigned power) {
  switch (power & 3u) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_same_width(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionError("qubit-count mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

PauliString::PauliString(std::string letters, unsigned phase_power)
    : letters_(std::move(letters)), phase_power_(phase_power & 3u) {
  for (char c : letters_) {
    if (!valid_letter(c)) {
      throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
    }
  }
}

void PauliString::set_letter(std::size_t q, char l) {
  if (!valid_letter(l)) {
    throw ValidationError(std::string("invalid Pauli letter '") + l + "'");
  }
  letters_.at(q) = l;
}

Complex PauliString::phase() const { return phase_value(phase_power_); }

bool PauliString::is_identity() const {
  return letters_.find_first_not_of('I') == std::string::npos;
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (char c : letters_) w += (c != 'I');
  return w;
}

std::size_t PauliString::y_count() const {
  std::size_t w = 0;
  for (char c : letters_) w += (c == 'Y');
  return w;
}

PauliString PauliString::operator*(const PauliString& other) const {
  require_same_width(n_qubits(), other.n_qubits());
  std::string out(n_qubits(), 'I');
  unsigned phase = phase_power_ + other.phase_power_;
  for (std::size_t q = 0; q < n_qubits(); ++q) {
    const int a = letter_index(letters_[q]);
    const int b = letter_index(other.letters_[q]);
    out[q] = kLetters[kProductLetter[a][b]];
    phase += kProductPhase[a][b];
  }
  return PauliString(std::move(out), phase & 3u);
}

PauliString PauliString::adjoint() const {
  // Letters are Hermitian; only the phase conjugates: (i^k)* = i^(4-k).
  return PauliString(letters_, (4u - phase_power_) & 3u);
}

bool PauliString::commutes_with(const PauliString& other) const {
  require_same_width(n_qubits(), other.n_qubits());
  std::size_t anti = 0;
  for (std::size_t q = 0; q < n_qubits(); ++q) {
    const char a = letters_[q];
    const char b = other.letters_[q];
    if (a != 'I' && b != 'I' && a != b) ++anti;
  }
  return (anti % 2) == 0;
}

std::uint64_t PauliString::flip_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < n_qubits(); ++q) {
    if (letters_[q] == 'X' || letters_[q] == 'Y') mask |= (std::uint64_t{1} << q);
  }
  return mask;
}

Complex PauliString::basis_coefficient(std::uint64_t j) const {
  // X|b> = |1-b>, Y|b> = i(-1)^b |1-b>, Z|b> = (-1)^b |b>.
  unsigned phase = phase_power_;
  for (std::size_t q = 0; q < n_qubits(); ++q) {
    const bool bit = (j >> q) & 1u;
    switch (letters_[q]) {
      case 'Y': phase += bit ? 3u : 1u; break;
      case 'Z': phase += bit ? 2u : 0u; break;
      default: break;
    }
  }
  return phase_value(phase);
}

Eigen::VectorXcd PauliString::apply(const Eigen::VectorXcd& state) const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits();
  if (static_cast<std::uint64_t>(state.size()) != dim) {
    throw DimensionError("statevector size does not match Pauli width");
  }
  Eigen::VectorXcd out(state.size());
  const std::uint64_t mask = flip_mask();
  for (std::uint64_t j = 0; j < dim; ++j) {
    out(j ^ mask) = basis_coefficient(j) * state(j);
  }
  return out;
}

Eigen::MatrixXcd PauliString::to_dense(std::size_t limit) const {
  if (n_qubits() > limit) {
    throw ResourceError("dense Pauli matrix would exceed the configured limit of " +
                        std::to_string(limit) + " qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::uint64_t mask = flip_mask();
  for (std::uint64_t j = 0; j < dim; ++j) {
    m(j ^ mask, j) = basis_coefficient(j);
  }
  return m;
}

PauliSum PauliSum::identity(std::size_t n_qubits, Complex coeff) {
  PauliSum s(n_qubits);
  s.add_term(std::string(n_qubits, 'I'), coeff);
  return s;
}

PauliSum PauliSum::single_letter(std::size_t n_qubits, std::size_t qubit,
                                 char letter, Complex coeff) {
  PauliSum s(n_qubits);
  PauliString p(n_qubits);
  p.set_letter(qubit, letter);
  s.add_term(p, coeff);
  return s;
}

Complex PauliSum::coefficient(const std::string& letters) const {
  auto it = terms_.find(letters);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

void PauliSum::add_term(const PauliString& str, Complex coeff, double tol) {
  require_same_width(str.n_qubits(), n_qubits_);
  const Complex value = coeff * str.phase();
  auto [it, inserted] = terms_.try_emplace(str.letters(), value);
  if (!inserted) it->second += value;
  if (std::abs(it->second) < tol) terms_.erase(it);
}

void PauliSum::add_term(const std::string& letters, Complex coeff, double tol) {
  add_term(PauliString(letters), coeff, tol);
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
  require_same_width(n_qubits_, other.n_qubits_);
  PauliSum out(n_qubits_);
  for (const auto& [la, ca] : terms_) {
    const PauliString pa(la);
    for (const auto& [lb, cb] : other.terms_) {
      const PauliString prod = pa * PauliString(lb);
      out.add_term(prod, ca * cb, 0.0);
    }
  }
  out.prune();
  return out;
}

PauliSum PauliSum::operator*(Complex scale) const {
  PauliSum out(n_qubits_);
  if (scale == Complex{0.0, 0.0}) return out;
  for (const auto& [l, c] : terms_) out.terms_.emplace(l, c * scale);
  out.prune();
  return out;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  return add_scaled(*this, 1.0, other);
}

PauliSum PauliSum::operator-(const PauliSum& other) const {
  return add_scaled(*this, -1.0, other);
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& [l, c] : terms_) out.terms_.emplace(l, std::conj(c));
  return out;
}

void PauliSum::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

double PauliSum::hermiticity_defect() const {
  double defect = 0.0;
  for (const auto& [l, c] : terms_) defect = std::max(defect, std::abs(c.imag()));
  return defect;
}

bool PauliSum::is_hermitian(double tol) const {
  return hermiticity_defect() <= tol;
}

Eigen::MatrixXcd PauliSum::to_dense(std::size_t limit) const {
  if (n_qubits_ > limit) {
    throw ResourceError("dense operator would exceed the configured limit of " +
                        std::to_string(limit) + " qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [l, c] : terms_) {
    const PauliString p(l);
    const std::uint64_t mask = p.flip_mask();
    for (std::uint64_t j = 0; j < dim; ++j) {
      m(j ^ mask, j) += c * p.basis_coefficient(j);
    }
  }
  return m;
}

Eigen::VectorXcd PauliSum::apply(const Eigen::VectorXcd& state) const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  if (static_cast<std::uint64_t>(state.size()) != dim) {
    throw DimensionError("statevector size does not match operator width");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.size());
  for (const auto& [l, c] : terms_) {
    const PauliString p(l);
    const std::uint64_t mask = p.flip_mask();
    for (std::uint64_t j = 0; j < dim; ++j) {
      out(j ^ mask) += c * p.basis_coefficient(j) * state(j);
    }
  }
  return out;
}

std::string PauliSum::to_text() const {
  std::string out;
  char buf[96];
  for (const auto& [l, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %s\n", c.real(), c.imag(),
                  l.c_str());
    out += buf;
  }
  return out;
}

PauliSum PauliSum::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  PauliSum out(0);
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    std::string letters;
    if (!(ls >> re >> im >> letters)) {
      throw ParseError("expected `coeff_re coeff_im LETTERS`", lineno);
    }
    if (first) {
      out = PauliSum(letters.size());
      first = false;
    }
    if (letters.size() != out.n_qubits()) {
      throw ParseError("inconsistent Pauli width", lineno);
    }
    out.add_term(PauliString(letters), Complex{re, im});
  }
  return out;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) { return a * b; }

PauliSum add_scaled(const PauliSum& a, Complex c, const PauliSum& b) {
  require_same_width(a.n_qubits(), b.n_qubits());
  if (c == Complex{0.0, 0.0}) return a;
  PauliSum out = a;
  for (const auto& [l, cb] : b.terms()) {
    out.add_term(l, c * cb);
  }
  out.prune();
  return out;
}

}  // namespace protonpipe
