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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace protonpipe {

using Complex = std::complex<double>;

/// Coefficient magnitude below which PauliSum terms are dropped.
inline constexpr double kDefaultPruneTol = 1e-12;

/// Largest register for which 2^n x 2^n dense matrices may be materialized.
inline constexpr std::size_t kDefaultDenseLimit = 14;

/// Tensor product of single-qubit Pauli letters with a fourth-root-of-unity
/// phase. `letters()[q]` is the letter acting on qubit q ('I', 'X', 'Y' or
/// 'Z'; qubit 0 is the leftmost character and the least significant bit of
/// basis indices). The phase is stored as the power k of the imaginary unit,
/// i.e. the string represents i^k * P_0 (x) P_1 (x) ...
class PauliString {
 public:
  explicit PauliString(std::size_t n_qubits)
      : letters_(n_qubits, 'I'), phase_power_(0) {}
  PauliString(std::string letters, unsigned phase_power = 0);

  std::size_t n_qubits() const { return letters_.size(); }
  const std::string& letters() const { return letters_; }
  char letter(std::size_t q) const { return letters_.at(q); }
  void set_letter(std::size_t q, char l);

  /// Phase as a power of i (0..3).
  unsigned phase_power() const { return phase_power_; }
  Complex phase() const;

  bool is_identity() const;
  /// Number of non-identity letters.
  std::size_t weight() const;
  std::size_t y_count() const;

  /// Full Pauli-group product, tracking the accumulated phase.
  PauliString operator*(const PauliString& other) const;

  /// Conjugate transpose (phase conjugated; letters unchanged).
  PauliString adjoint() const;

  bool commutes_with(const PauliString& other) const;

  /// Basis-index action: P|j> = coeff(j) |j ^ flip_mask()|.
  std::uint64_t flip_mask() const;
  Complex basis_coefficient(std::uint64_t source_index) const;

  /// Applies the string to a dense statevector (phase included).
  Eigen::VectorXcd apply(const Eigen::VectorXcd& state) const;

  Eigen::MatrixXcd to_dense(std::size_t limit = kDefaultDenseLimit) const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.letters_ == b.letters_ && a.phase_power_ == b.phase_power_;
  }

 private:
  std::string letters_;
  unsigned phase_power_;  // i^phase_power_, 0..3
};

/// Sparse weighted sum of Pauli strings in canonical form: at most one entry
/// per letter pattern, phases folded into coefficients, no stored coefficient
/// below the prune tolerance. Deterministic term order (lexicographic in the
/// letter pattern).
class PauliSum {
 public:
  using TermMap = std::map<std::string, Complex>;

  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  static PauliSum identity(std::size_t n_qubits, Complex coeff = 1.0);
  /// Single letter on one qubit, e.g. single_letter(4, 2, 'X') = X_2.
  static PauliSum single_letter(std::size_t n_qubits, std::size_t qubit,
                                char letter, Complex coeff = 1.0);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_terms() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Complex coefficient(const std::string& letters) const;

  /// Accumulates coeff * string (string phase folded in), then prunes.
  void add_term(const PauliString& str, Complex coeff,
                double tol = kDefaultPruneTol);
  void add_term(const std::string& letters, Complex coeff,
                double tol = kDefaultPruneTol);

  PauliSum operator*(const PauliSum& other) const;
  PauliSum operator*(Complex scale) const;
  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator-(const PauliSum& other) const;

  PauliSum adjoint() const;
  void prune(double tol = kDefaultPruneTol);

  /// Max |imag part| over canonical coefficients; 0 for Hermitian sums.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = kDefaultPruneTol) const;

  Eigen::MatrixXcd to_dense(std::size_t limit = kDefaultDenseLimit) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& state) const;

  /// One term per line: `coeff_re coeff_im LETTERS`.
  std::string to_text() const;
  static PauliSum from_text(const std::string& text);

 private:
  std::size_t n_qubits_ = 0;
  TermMap terms_;
};

/// Canonical product a*b. Throws DimensionError on qubit-count mismatch.
PauliSum multiply(const PauliSum& a, const PauliSum& b);

/// Canonical a + c*b. Throws DimensionError on qubit-count mismatch.
/// c == 0 returns a unchanged.
PauliSum add_scaled(const PauliSum& a, Complex c, const PauliSum& b);

}  // namespace protonpipe
