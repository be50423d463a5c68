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

#include "qcorr/bipartite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcorr/qmat_io.hpp"

namespace qcorr {

namespace {

void check_dims(const std::optional<BipartiteDims>& dims, Index dim) {
  if (!dims) return;
  if (dims->d1 < 1 || dims->d2 < 1 || dims->total() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "bipartite dims " + std::to_string(dims->d1) + "x" + std::to_string(dims->d2) +
                    " do not match dimension " + std::to_string(dim));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m, std::optional<BipartiteDims> dims)
    : op_(m), dims_(dims) {
  check_dims(dims_, op_.dim());
  const double trace = op_.matrix().trace().real();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw Error(ErrorCode::BadTrace, "trace " + format_double(trace) + " is not 1");
  }
  const SpectralDecomposition sd = hermitian_eig(op_);
  const double floor = psd_floor();
  if (sd.eigenvalues[0] < -floor) {
    throw Error(ErrorCode::NegativeSpectrum,
                "eigenvalue " + format_double(sd.eigenvalues[0]) + " below -psd_floor");
  }
  if (sd.eigenvalues[0] < 0.0) {
    RealVector clamped = sd.eigenvalues.cwiseMax(0.0);
    psd_correction_ = (clamped - sd.eigenvalues).sum();
    clamped /= clamped.sum();
    op_ = HermitianOperator(sd.eigenvectors * clamped.cast<Complex>().asDiagonal() *
                            sd.eigenvectors.adjoint());
  }
}

DensityMatrix DensityMatrix::normalized(const ComplexMatrix& m, std::optional<BipartiteDims> dims) {
  const Complex trace = m.trace();
  if (!(std::abs(trace) > 0.0)) throw Error(ErrorCode::BadTrace, "cannot normalize zero trace");
  return DensityMatrix(m / trace.real(), dims);
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi, std::optional<BipartiteDims> dims) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::BadTrace, "zero vector");
  const ComplexVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint(), dims);
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim, std::optional<BipartiteDims> dims) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), dims);
}

const BipartiteDims& DensityMatrix::bipartite() const {
  if (!dims_) throw Error(ErrorCode::MissingDims, "state carries no bipartite dims");
  return *dims_;
}

double DensityMatrix::purity() const {
  return matrix().cwiseAbs2().sum();
}

double DensityMatrix::expectation(const ComplexMatrix& observable) const {
  if (observable.rows() != dim() || observable.cols() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "observable dimension differs from state");
  }
  return (matrix().transpose().cwiseProduct(observable)).sum().real();
}

DensityMatrix DensityMatrix::with_dims(BipartiteDims dims) const {
  check_dims(dims, dim());
  DensityMatrix out = *this;
  out.dims_ = dims;
  return out;
}

PureEnsemble::PureEnsemble(std::vector<double> weights, std::vector<ComplexVector> components,
                           std::optional<BipartiteDims> dims)
    : weights_(std::move(weights)), components_(std::move(components)), dims_(dims) {
  if (weights_.size() != components_.size()) {
    throw Error(ErrorCode::LengthMismatch, "weights and components differ in length");
  }
  if (weights_.empty()) throw Error(ErrorCode::BadWeights, "empty ensemble");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorCode::BadWeights, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kTraceTolerance) {
    throw Error(ErrorCode::BadWeights, "weights sum to " + format_double(sum));
  }
  const Index dim = components_.front().size();
  for (const auto& c : components_) {
    if (c.size() != dim) throw Error(ErrorCode::DimensionMismatch, "component sizes differ");
    if (std::abs(c.norm() - 1.0) > 1e-10) {
      throw Error(ErrorCode::BadBasis, "component is not a unit vector");
    }
  }
  check_dims(dims_, dim);
}

ComplexMatrix PureEnsemble::barycenter() const {
  const Index dim = ambient_dim();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < size(); ++i) {
    out.noalias() += weights_[i] * (components_[i] * components_[i].adjoint());
  }
  return out;
}

double PureEnsemble::barycenter_error(const ComplexMatrix& rho) const {
  return trace_norm(barycenter() - rho);
}

RangeFactor range_factor(const DensityMatrix& rho, double rel_threshold) {
  const SpectralDecomposition sd = hermitian_eig(rho.op());
  const Index dim = rho.dim();
  const double largest = sd.eigenvalues[dim - 1];
  Index rank = 0;
  for (Index i = dim - 1; i >= 0 && sd.eigenvalues[i] > rel_threshold * largest; --i) ++rank;
  RangeFactor out;
  out.eigenvalues.resize(rank);
  out.eigenvectors.resize(dim, rank);
  out.scaled.resize(dim, rank);
  for (Index j = 0; j < rank; ++j) {
    const Index src = dim - 1 - j;
    out.eigenvalues[j] = sd.eigenvalues[src];
    out.eigenvectors.col(j) = sd.eigenvectors.col(src);
    out.scaled.col(j) = std::sqrt(sd.eigenvalues[src]) * sd.eigenvectors.col(src);
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Subsystem keep) {
  const Index d1 = dims.d1;
  const Index d2 = dims.d2;
  if (keep == Subsystem::First) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Index a = 0; a < d1; ++a)
      for (Index b = 0; b < d1; ++b)
        for (Index k = 0; k < d2; ++k) out(a, b) += m(a * d2 + k, b * d2 + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index k = 0; k < d1; ++k) out += m.block(k * d2, k * d2, d2, d2);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteDims dims) {
  const Index d2 = dims.d2;
  ComplexMatrix out(m.rows(), m.cols());
  for (Index a = 0; a < dims.d1; ++a)
    for (Index b = 0; b < dims.d1; ++b)
      out.block(a * d2, b * d2, d2, d2) = m.block(a * d2, b * d2, d2, d2).transpose();
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  return DensityMatrix(partial_trace(rho.matrix(), rho.bipartite(), keep));
}

HermitianOperator partial_transpose(const DensityMatrix& rho) {
  return HermitianOperator(partial_transpose(rho.matrix(), rho.bipartite()));
}

DensityMatrix max_entangled(Index n, MaxEntangledVariant variant) {
  if (n < 2) throw Error(ErrorCode::BadConfig, "maximally entangled state needs n >= 2");
  ComplexVector psi = ComplexVector::Zero(n * n);
  if (variant == MaxEntangledVariant::Singlet) {
    if (n != 2) throw Error(ErrorCode::BadConfig, "singlet variant is defined for n = 2");
    psi[2] = 1.0;   // |10>
    psi[1] = -1.0;  // |01>
  } else {
    for (Index i = 0; i < n; ++i) psi[i * n + i] = 1.0;
  }
  return DensityMatrix::pure(psi, BipartiteDims{n, n});
}

DensityMatrix separable_from_ensemble(std::span<const double> weights,
                                      std::span<const DensityMatrix> left,
                                      std::span<const DensityMatrix> right) {
  if (weights.size() != left.size() || left.size() != right.size()) {
    throw Error(ErrorCode::LengthMismatch, "weights, left and right lists differ in length");
  }
  if (weights.empty()) throw Error(ErrorCode::BadWeights, "empty ensemble");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::BadWeights, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kTraceTolerance) {
    throw Error(ErrorCode::BadWeights, "weights sum to " + format_double(sum));
  }
  const BipartiteDims dims{left.front().dim(), right.front().dim()};
  ComplexMatrix acc = ComplexMatrix::Zero(dims.total(), dims.total());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (left[i].dim() != dims.d1 || right[i].dim() != dims.d2) {
      throw Error(ErrorCode::DimensionMismatch, "factor dimensions differ across terms");
    }
    acc += weights[i] * kron(left[i].matrix(), right[i].matrix());
  }
  return DensityMatrix(acc, dims);
}

PureEnsemble gns_orthogonal_decomposition(const DensityMatrix& rho,
                                          std::span<const ComplexVector> basis) {
  const Index dim = rho.dim();
  if (static_cast<Index>(basis.size()) != dim) {
    throw Error(ErrorCode::BadBasis, "basis does not span the space");
  }
  ComplexMatrix e(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    if (basis[i].size() != dim) throw Error(ErrorCode::BadBasis, "basis vector has wrong size");
    e.col(i) = basis[i];
  }
  if ((e.adjoint() * e - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::BadBasis, "basis is not orthonormal");
  }
  const ComplexMatrix root = psd_sqrt(rho.matrix());
  std::vector<double> weights;
  std::vector<ComplexVector> comps;
  double total = 0.0;
  for (Index i = 0; i < dim; ++i) {
    const ComplexVector v = root * e.col(i);
    const double w = v.squaredNorm();  // <e_i|rho|e_i>
    if (w <= kGnsZeroWeight) continue;
    weights.push_back(w);
    comps.push_back(v / std::sqrt(w));
    total += w;
  }
  for (double& w : weights) w /= total;
  return PureEnsemble(std::move(weights), std::move(comps), rho.dims());
}

PureEnsemble ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& mix) {
  const RangeFactor range = range_factor(rho);
  const Index r = range.rank();
  if (mix.cols() != r) {
    throw Error(ErrorCode::NotIsometry, "mix has " + std::to_string(mix.cols()) +
                                            " columns, rank is " + std::to_string(r));
  }
  if ((mix.adjoint() * mix - ComplexMatrix::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorCode::NotIsometry, "mix* mix differs from identity");
  }
  // Rows of mix * scaled^T are the unnormalized components.
  const ComplexMatrix rows = mix * range.scaled.transpose();
  std::vector<double> weights;
  std::vector<ComplexVector> comps;
  double total = 0.0;
  for (Index i = 0; i < rows.rows(); ++i) {
    const double w = rows.row(i).squaredNorm();
    if (w <= 1e-300) continue;
    weights.push_back(w);
    comps.push_back(rows.row(i).transpose() / std::sqrt(w));
    total += w;
  }
  for (double& w : weights) w /= total;
  return PureEnsemble(std::move(weights), std::move(comps), rho.dims());
}

DensityMatrix read_density_matrix(const std::filesystem::path& path) {
  QmatRecord rec = read_qmat_file(path);
  std::optional<BipartiteDims> dims;
  if (rec.dims) dims = BipartiteDims{(*rec.dims)[0], (*rec.dims)[1]};
  if (rec.matrix.rows() != rec.matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be square");
  }
  return DensityMatrix(rec.matrix, dims);
}

void write_density_matrix(const std::filesystem::path& path, const DensityMatrix& rho) {
  QmatRecord rec{rho.matrix(), std::nullopt};
  if (rho.dims()) rec.dims = std::array<Index, 2>{rho.dims()->d1, rho.dims()->d2};
  write_qmat_file(path, rec);
}

}  // namespace qcorr
