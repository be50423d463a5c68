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

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "qcorr/numerics.hpp"

namespace qcorr {

/// Dimensions of H_1 (x) H_2. Basis index of |i1>|i2> is i1 * d2 + i2.
struct BipartiteDims {
  Index d1 = 2;
  Index d2 = 2;

  Index total() const noexcept { return d1 * d2; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

enum class Subsystem { First = 1, Second = 2 };

inline constexpr double kTraceTolerance = 1e-10;

/// Positive semidefinite, unit-trace operator, optionally tagged bipartite.
///
/// Eigenvalues in [-psd_floor, 0) are clamped to zero and the trace is
/// renormalized; the trace norm of the removed part is kept in
/// psd_correction(). Anything more negative throws NegativeSpectrum, and a
/// trace off by more than 1e-10 throws BadTrace.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, std::optional<BipartiteDims> dims = std::nullopt);

  /// Divides by the trace before validating.
  static DensityMatrix normalized(const ComplexMatrix& m,
                                  std::optional<BipartiteDims> dims = std::nullopt);
  static DensityMatrix pure(const ComplexVector& psi,
                            std::optional<BipartiteDims> dims = std::nullopt);
  static DensityMatrix maximally_mixed(Index dim, std::optional<BipartiteDims> dims = std::nullopt);

  Index dim() const noexcept { return op_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  const HermitianOperator& op() const noexcept { return op_; }
  const std::optional<BipartiteDims>& dims() const noexcept { return dims_; }
  /// Throws MissingDims when the state is not bipartite-tagged.
  const BipartiteDims& bipartite() const;
  double psd_correction() const noexcept { return psd_correction_; }

  double purity() const;
  double expectation(const ComplexMatrix& observable) const;

  DensityMatrix with_dims(BipartiteDims dims) const;

 private:
  HermitianOperator op_;
  std::optional<BipartiteDims> dims_;
  double psd_correction_ = 0.0;
};

/// Finite list of weighted pure states; the finitely supported stand-in for a
/// decomposition measure of a state.
class PureEnsemble {
 public:
  PureEnsemble(std::vector<double> weights, std::vector<ComplexVector> components,
               std::optional<BipartiteDims> dims = std::nullopt);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<ComplexVector>& components() const noexcept { return components_; }
  const std::optional<BipartiteDims>& dims() const noexcept { return dims_; }
  Index ambient_dim() const noexcept { return components_.front().size(); }

  ComplexMatrix barycenter() const;
  /// Trace-norm distance between the barycenter and `rho`.
  double barycenter_error(const ComplexMatrix& rho) const;

 private:
  std::vector<double> weights_;
  std::vector<ComplexVector> components_;
  std::optional<BipartiteDims> dims_;
};

/// Range of a state: columns sqrt(lambda_j) v_j for eigenvalues above the
/// rank threshold (1e-10 relative to the largest eigenvalue).
struct RangeFactor {
  RealVector eigenvalues;     // kept eigenvalues, descending
  ComplexMatrix eigenvectors; // d x r
  ComplexMatrix scaled;       // d x r, column j = sqrt(lambda_j) v_j

  Index rank() const noexcept { return eigenvalues.size(); }
};

inline constexpr double kRankThreshold = 1e-10;

RangeFactor range_factor(const DensityMatrix& rho, double rel_threshold = kRankThreshold);

// Raw-matrix kernels shared with the optimizers.
ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Subsystem keep);
ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteDims dims);

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);
/// Transpose on the second factor. Hermitian with unit trace, not necessarily PSD.
HermitianOperator partial_transpose(const DensityMatrix& rho);

enum class MaxEntangledVariant {
  Canonical,  // (1/sqrt n) sum_i |i>|i>
  Singlet,    // (|10> - |01>)/sqrt 2, n = 2 only
};

DensityMatrix max_entangled(Index n, MaxEntangledVariant variant = MaxEntangledVariant::Canonical);

/// sum_i w_i left_i (x) right_i.
DensityMatrix separable_from_ensemble(std::span<const double> weights,
                                      std::span<const DensityMatrix> left,
                                      std::span<const DensityMatrix> right);

inline constexpr double kGnsZeroWeight = 1e-12;

/// Decomposition rho = sum_i lambda_i |psi_i><psi_i| with
/// psi_i ~ rho^{1/2} e_i and lambda_i = <e_i|rho|e_i>; zero-weight terms
/// (below 1e-12) are dropped. `basis` must be orthonormal and complete.
PureEnsemble gns_orthogonal_decomposition(const DensityMatrix& rho,
                                          std::span<const ComplexVector> basis);

/// Ensemble psi~_i = sum_j mix(i, j) sqrt(lambda_j) v_j built from the
/// spectral data of `rho`. `mix` is m x r with mix* mix = I_r.
PureEnsemble ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& mix);

/// Default ensemble size cap r^2.
inline Index default_ensemble_cap(Index rank) { return rank * rank; }

DensityMatrix read_density_matrix(const std::filesystem::path& path);
void write_density_matrix(const std::filesystem::path& path, const DensityMatrix& rho);

}  // namespace qcorr
