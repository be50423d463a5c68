// Copyright 2026 The qcorr Authors
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
#include <string_view>

#include <Eigen/Dense>

#include "qcorr/errors.hpp"

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultPsdFloor = 1e-10;
inline constexpr double kHermiticityRelTol = 1e-9;

/// Eigenvalue floor below which a PSD check fails. Defaults to 1e-10; the
/// QCORR_PSD_FLOOR environment variable overrides it (read once per process).
double psd_floor();

/// Square complex matrix that is self-adjoint up to a relative tolerance.
///
/// Construction symmetrizes to (M + M*)/2 after checking that the defect
/// max|M - M*| is within `rel_tol * max|M_ij|`; the defect before
/// symmetrization is kept for diagnostics.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m, double rel_tol = kHermiticityRelTol);

  Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  double hermiticity_defect() const noexcept { return defect_; }

  /// Tr(rho * M), real part.
  double expectation(const ComplexMatrix& rho) const;

 private:
  ComplexMatrix matrix_;
  double defect_ = 0.0;
};

struct SpectralDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // orthonormal columns

  ComplexMatrix reconstruct() const;
};

SpectralDecomposition hermitian_eig(const HermitianOperator& op);

/// Spectral functions available to matrix_function.
struct MatrixFunction {
  enum class Kind { Sqrt, Exp, NegExpScaled };

  Kind kind = Kind::Sqrt;
  double beta = 1.0;  // only used by NegExpScaled: x -> exp(-beta x)

  static MatrixFunction sqrt() { return {Kind::Sqrt, 1.0}; }
  static MatrixFunction exp() { return {Kind::Exp, 1.0}; }
  static MatrixFunction neg_exp_scaled(double beta) { return {Kind::NegExpScaled, beta}; }
};

/// Applies `f` to the spectrum of `op`. For Sqrt, eigenvalues in
/// [-psd_floor, 0) are clamped to zero; anything lower throws NegativeSpectrum.
HermitianOperator matrix_function(const HermitianOperator& op, MatrixFunction f);

/// PSD square root of a Hermitian matrix given as raw data.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Pauli matrix sigma^j for j in {0,1,2,3} (sigma^0 is the identity).
ComplexMatrix pauli(int j);

/// Tensor product of single-qubit Paulis, e.g. "XZ" or "IY"; leftmost letter
/// acts on the slowest index.
ComplexMatrix pauli_word(std::string_view word);

}  // namespace qcorr
