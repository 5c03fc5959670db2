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

#include "protonpipe/density.hpp"

#include <bit>
#include <cmath>

#include "protonpipe/errors.hpp"

namespace protonpipe {

DensityOperator DensityOperator::from_state(const StateVector& psi) {
  const auto& a = psi.amplitudes();
  return DensityOperator(psi.n_qubits(), a * a.adjoint());
}

DensityOperator DensityOperator::from_matrix(Eigen::MatrixXcd matrix,
                                             double psd_tol) {
  const std::size_t dim = static_cast<std::size_t>(matrix.rows());
  if (matrix.rows() != matrix.cols() || dim == 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("density matrix dimension must be a power of two");
  }
  if (std::abs(matrix.trace().real() - 1.0) > 1e-9 ||
      std::abs(matrix.trace().imag()) > 1e-9) {
    throw ValidationError("density matrix trace is not 1");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("density matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
  if (es.eigenvalues().minCoeff() < -psd_tol) {
    throw ValidationError("density matrix is not positive semidefinite");
  }
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
  return DensityOperator(n, std::move(matrix));
}

double DensityOperator::purity() const {
  return (matrix_ * matrix_).trace().real();
}

DensityOperator reduced_density(const StateVector& psi,
                                const std::vector<std::size_t>& keep) {
  return DensityOperator::from_matrix(reduced_density_matrix(psi, keep));
}

}  // namespace protonpipe
