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

#include <utility>
#include <vector>

#include "qcorr/bipartite.hpp"
#include "qcorr/ensemble_search.hpp"

namespace qcorr {

inline constexpr double kVarianceFloor = 1e-12;

/// Joint distribution of two discrete random variables, stored sparsely as
/// (x index, y index, probability) triples.
class DiscreteJoint {
 public:
  struct Entry {
    std::size_t x = 0;
    std::size_t y = 0;
    double p = 0.0;
  };

  /// Dense table grid[i][j] = p(x_i, y_j).
  static DiscreteJoint from_grid(std::vector<double> xvals, std::vector<double> yvals,
                                 const std::vector<std::vector<double>>& grid);
  /// Paired samples (xs[k], ys[k]) with probabilities weights[k].
  static DiscreteJoint from_pairs(std::vector<double> xs, std::vector<double> ys,
                                  const std::vector<double>& weights);

  const std::vector<double>& xvals() const noexcept { return xvals_; }
  const std::vector<double>& yvals() const noexcept { return yvals_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  DiscreteJoint(std::vector<double> xvals, std::vector<double> yvals, std::vector<Entry> entries);

  std::vector<double> xvals_;
  std::vector<double> yvals_;
  std::vector<Entry> entries_;
};

struct CorrelationReport {
  double value = 0.0;                     // in [-1, 1]
  double numerator = 0.0;                 // covariance
  std::pair<double, double> variances{};  // (Var X, Var Y)
};

/// C(X, Y) = (E[XY] - E[X]E[Y]) / sqrt(Var X Var Y).
CorrelationReport classical_correlation(const DiscreteJoint& joint,
                                        double variance_floor = kVarianceFloor);

/// Quantum correlation coefficient of A = a (x) 1 and A' = 1 (x) a2 in `rho`.
/// Signed; the singlet with projector observables gives -1.
CorrelationReport quantum_correlation_coefficient(const DensityMatrix& rho,
                                                  const HermitianOperator& a,
                                                  const HermitianOperator& a2,
                                                  double variance_floor = kVarianceFloor);

/// sum_i lambda_i Tr_2(P_i) (x) Tr_1(P_i): the separable state obtained by
/// replacing every component with the product of its reductions.
DensityMatrix separable_shadow(const PureEnsemble& ensemble);

struct DqcResult {
  double value = 0.0;             // d(rho, A) for the observable as given
  double observable_norm = 1.0;   // operator norm of A
  double normalized_value = 0.0;  // value / observable_norm
  DensityMatrix best_shadow;
  PureEnsemble best_ensemble;
  int restarts_used = 0;
  bool converged = false;
};

/// Coefficient of quantum correlations: the smallest gap
/// |Tr(rho A) - Tr(shadow(mu) A)| over the searched decompositions mu of rho.
/// An upper bound on the infimum; never increases with more restarts.
DqcResult quantum_correlation_distance(const DensityMatrix& rho, const HermitianOperator& a,
                                       const OptimizerSettings& opts);

struct CorrelationProfile {
  std::vector<DqcResult> results;
  double score = 0.0;  // max normalized_value over the family
};

CorrelationProfile quantum_correlation_profile(const DensityMatrix& rho,
                                               const std::vector<HermitianOperator>& family,
                                               const OptimizerSettings& opts);

/// Identity plus traceless Hermitian basis of one factor: Pauli words when
/// `dim` is a power of two, generalized Gell-Mann matrices otherwise.
std::vector<ComplexMatrix> local_operator_basis(Index dim);

/// All products a (x) b of local basis elements (Pauli products for qubits).
std::vector<HermitianOperator> pauli_product_family(BipartiteDims dims);

}  // namespace qcorr
