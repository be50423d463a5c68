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

#include "qcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcorr {

DiscreteJoint::DiscreteJoint(std::vector<double> xvals, std::vector<double> yvals,
                             std::vector<Entry> entries)
    : xvals_(std::move(xvals)), yvals_(std::move(yvals)), entries_(std::move(entries)) {
  double sum = 0.0;
  for (const Entry& e : entries_) {
    if (e.x >= xvals_.size() || e.y >= yvals_.size()) {
      throw Error(ErrorCode::LengthMismatch, "joint entry index out of range");
    }
    if (!(e.p >= 0.0)) throw Error(ErrorCode::BadWeights, "negative probability");
    sum += e.p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadWeights, "probabilities sum to " + std::to_string(sum));
  }
}

DiscreteJoint DiscreteJoint::from_grid(std::vector<double> xvals, std::vector<double> yvals,
                                       const std::vector<std::vector<double>>& grid) {
  if (grid.size() != xvals.size()) throw Error(ErrorCode::LengthMismatch, "grid rows != |x|");
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].size() != yvals.size()) {
      throw Error(ErrorCode::LengthMismatch, "grid columns != |y|");
    }
    for (std::size_t j = 0; j < grid[i].size(); ++j) {
      if (grid[i][j] != 0.0) entries.push_back({i, j, grid[i][j]});
    }
  }
  return DiscreteJoint(std::move(xvals), std::move(yvals), std::move(entries));
}

DiscreteJoint DiscreteJoint::from_pairs(std::vector<double> xs, std::vector<double> ys,
                                        const std::vector<double>& weights) {
  if (xs.size() != ys.size() || xs.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "paired samples differ in length");
  }
  std::vector<Entry> entries;
  entries.reserve(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) entries.push_back({k, k, weights[k]});
  return DiscreteJoint(std::move(xs), std::move(ys), std::move(entries));
}

CorrelationReport classical_correlation(const DiscreteJoint& joint, double variance_floor) {
  double ex = 0.0, ey = 0.0;
  for (const auto& e : joint.entries()) {
    ex += e.p * joint.xvals()[e.x];
    ey += e.p * joint.yvals()[e.y];
  }
  // Centered sums are better conditioned than E[X^2] - E[X]^2.
  double vx = 0.0, vy = 0.0, cov = 0.0;
  for (const auto& e : joint.entries()) {
    const double dx = joint.xvals()[e.x] - ex;
    const double dy = joint.yvals()[e.y] - ey;
    vx += e.p * dx * dx;
    vy += e.p * dy * dy;
    cov += e.p * dx * dy;
  }
  if (vx <= variance_floor || vy <= variance_floor) {
    throw Error(ErrorCode::DegenerateVariance, "a marginal is almost surely constant");
  }
  return {cov / std::sqrt(vx * vy), cov, {vx, vy}};
}

CorrelationReport quantum_correlation_coefficient(const DensityMatrix& rho,
                                                  const HermitianOperator& a,
                                                  const HermitianOperator& a2,
                                                  double variance_floor) {
  const BipartiteDims dims = rho.bipartite();
  if (a.dim() != dims.d1 || a2.dim() != dims.d2) {
    throw Error(ErrorCode::DimensionMismatch, "observables do not match the factors");
  }
  const ComplexMatrix big_a = kron(a.matrix(), ComplexMatrix::Identity(dims.d2, dims.d2));
  const ComplexMatrix big_a2 = kron(ComplexMatrix::Identity(dims.d1, dims.d1), a2.matrix());
  const double mean_a = rho.expectation(big_a);
  const double mean_a2 = rho.expectation(big_a2);
  const ComplexMatrix id = ComplexMatrix::Identity(rho.dim(), rho.dim());
  const ComplexMatrix ca = big_a - mean_a * id;
  const ComplexMatrix ca2 = big_a2 - mean_a2 * id;
  const double va = rho.expectation(ca * ca);
  const double va2 = rho.expectation(ca2 * ca2);
  if (va <= variance_floor || va2 <= variance_floor) {
    throw Error(ErrorCode::DegenerateVariance, "observable has no spread in this state");
  }
  // A and A' commute, so (A - <A>)(A' - <A'>) is Hermitian.
  const double cov = rho.expectation(ca * ca2);
  return {cov / std::sqrt(va * va2), cov, {va, va2}};
}

DensityMatrix separable_shadow(const PureEnsemble& ensemble) {
  if (!ensemble.dims()) throw Error(ErrorCode::MissingDims, "ensemble carries no bipartite dims");
  const BipartiteDims dims = *ensemble.dims();
  ComplexMatrix acc = ComplexMatrix::Zero(dims.total(), dims.total());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const ComplexVector& psi = ensemble.components()[i];
    const ComplexMatrix p = psi * psi.adjoint();
    acc += ensemble.weights()[i] *
           kron(partial_trace(p, dims, Subsystem::First), partial_trace(p, dims, Subsystem::Second));
  }
  return DensityMatrix(acc, dims);
}

namespace {

// |Tr(rho A) - sum_i Tr((R1_i (x) R2_i) A) / w_i| with R_k the reductions of
// the unnormalized component psi~_i.
class ShadowGapObjective final : public EnsembleObjective {
 public:
  ShadowGapObjective(BipartiteDims dims, const ComplexMatrix& a, double target)
      : dims_(dims), a_transposed_(a.transpose()), target_(target) {}

  double contribution(const ComplexVector& psi) const override {
    const double w = psi.squaredNorm();
    if (w <= 0.0) return 0.0;
    // M(i1, i2) = psi[i1 * d2 + i2]
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(psi.data(), dims_.d1, dims_.d2);
    const ComplexMatrix r1 = m * m.adjoint();
    const ComplexMatrix r2 = m.transpose() * m.conjugate();
    return kron(r1, r2).cwiseProduct(a_transposed_).sum().real() / w;
  }

  double value(double mean) const override { return std::abs(target_ - mean); }

 private:
  BipartiteDims dims_;
  ComplexMatrix a_transposed_;
  double target_;
};

}  // namespace

DqcResult quantum_correlation_distance(const DensityMatrix& rho, const HermitianOperator& a,
                                       const OptimizerSettings& opts) {
  const BipartiteDims dims = rho.bipartite();
  if (a.dim() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "observable dimension differs from state");
  }
  // Both functionals are normalized, so only the traceless part of A matters;
  // dropping the identity component makes d(rho, c 1) exactly zero.
  ComplexMatrix traceless = a.matrix();
  traceless.diagonal().array() -= a.matrix().trace() / static_cast<double>(a.dim());
  const ShadowGapObjective objective(dims, traceless, rho.expectation(traceless));
  EnsembleSearchResult found = minimize_over_ensembles(rho, objective, opts);
  DensityMatrix shadow = separable_shadow(found.best_ensemble);
  const double norm = operator_norm(a.matrix());
  const double normalized = norm > 0.0 ? found.value / norm : 0.0;
  return DqcResult{found.value,           norm,
                   normalized,            std::move(shadow),
                   std::move(found.best_ensemble), found.restarts_used,
                   found.converged};
}

CorrelationProfile quantum_correlation_profile(const DensityMatrix& rho,
                                               const std::vector<HermitianOperator>& family,
                                               const OptimizerSettings& opts) {
  CorrelationProfile out;
  out.results.reserve(family.size());
  for (const auto& a : family) {
    out.results.push_back(quantum_correlation_distance(rho, a, opts));
    out.score = std::max(out.score, out.results.back().normalized_value);
  }
  return out;
}

std::vector<ComplexMatrix> local_operator_basis(Index dim) {
  if (dim < 1) throw Error(ErrorCode::BadConfig, "dimension must be positive");
  std::vector<ComplexMatrix> basis;
  Index qubits = 0;
  while ((Index{1} << qubits) < dim) ++qubits;
  if ((Index{1} << qubits) == dim) {
    const Index count = Index{1} << (2 * qubits);
    for (Index code = 0; code < count; ++code) {
      std::string word;
      for (Index q = qubits - 1; q >= 0; --q) word.push_back("IXYZ"[(code >> (2 * q)) & 3]);
      basis.push_back(pauli_word(word));
    }
    return basis;
  }
  basis.push_back(ComplexMatrix::Identity(dim, dim));
  const Complex i1(0.0, 1.0);
  for (Index j = 0; j < dim; ++j) {
    for (Index k = j + 1; k < dim; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(j, k) = sym(k, j) = 1.0;
      ComplexMatrix asym = ComplexMatrix::Zero(dim, dim);
      asym(j, k) = -i1;
      asym(k, j) = i1;
      basis.push_back(sym);
      basis.push_back(asym);
    }
  }
  for (Index l = 1; l < dim; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Index j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    basis.push_back(diag);
  }
  return basis;
}

std::vector<HermitianOperator> pauli_product_family(BipartiteDims dims) {
  const auto left = local_operator_basis(dims.d1);
  const auto right = local_operator_basis(dims.d2);
  std::vector<HermitianOperator> family;
  family.reserve(left.size() * right.size());
  for (const auto& a : left)
    for (const auto& b : right) family.emplace_back(kron(a, b));
  return family;
}

}  // namespace qcorr
