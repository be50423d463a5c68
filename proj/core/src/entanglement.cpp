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

#include "qcorr/entanglement.hpp"

#include <cmath>
#include <limits>

namespace qcorr {

double EntropyFunctional::of_spectrum(const RealVector& eigenvalues) const {
  if (kind == Kind::Linear) {
    return std::max(0.0, 1.0 - eigenvalues.squaredNorm());
  }
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues[i];
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

double entropy(const DensityMatrix& rho, EntropyFunctional f) {
  if (f.kind == EntropyFunctional::Kind::Linear) {
    return std::max(0.0, 1.0 - rho.purity());
  }
  return f.of_spectrum(hermitian_eig(rho.op()).eigenvalues);
}

double m_a(const DensityMatrix& sigma) {
  const ComplexMatrix r = partial_trace(sigma.matrix(), sigma.bipartite(), Subsystem::Second);
  return std::max(0.0, r.trace().real() - r.cwiseAbs2().sum());
}

namespace {

// sum_i w_i F(R_i / w_i), R_i the reduction of the unnormalized psi~_i onto
// the smaller factor (both reductions share their nonzero spectrum).
class FormationObjective final : public EnsembleObjective {
 public:
  FormationObjective(BipartiteDims dims, EntropyFunctional f) : dims_(dims), f_(f) {}

  double contribution(const ComplexVector& psi) const override {
    const double w = psi.squaredNorm();
    if (w <= 0.0) return 0.0;
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(psi.data(), dims_.d1, dims_.d2);
    const ComplexMatrix r =
        dims_.d1 <= dims_.d2 ? ComplexMatrix(m * m.adjoint()) : ComplexMatrix(m.transpose() * m.conjugate());
    if (f_.kind == EntropyFunctional::Kind::Linear) {
      return std::max(0.0, w - r.cwiseAbs2().sum() / w);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r / w, Eigen::EigenvaluesOnly);
    return w * f_.of_spectrum(solver.eigenvalues());
  }

 private:
  BipartiteDims dims_;
  EntropyFunctional f_;
};

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

}  // namespace

EofResult eof(const DensityMatrix& rho, EntropyFunctional f, const OptimizerSettings& opts) {
  const FormationObjective objective(rho.bipartite(), f);
  EnsembleSearchResult found = minimize_over_ensembles(rho, objective, opts);
  return EofResult{found.value, std::move(found.best_ensemble), found.restarts_used,
                   found.converged};
}

PptVerdict ppt_direct(const DensityMatrix& rho) {
  const double min_pt = min_eigenvalue(partial_transpose(rho.matrix(), rho.bipartite()));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return PptVerdict{min_pt >= -psd_floor(), min_pt, nan, nan};
}

EntanglementMap::EntanglementMap(BipartiteDims dims, ComplexMatrix action)
    : dims_(dims), action_(std::move(action)) {
  if (action_.rows() != dims_.d1 * dims_.d1 || action_.cols() != dims_.d2 * dims_.d2) {
    throw Error(ErrorCode::DimensionMismatch, "action matrix shape does not match dims");
  }
}

ComplexMatrix EntanglementMap::apply(const ComplexMatrix& b) const {
  const Index d1 = dims_.d1;
  const Index d2 = dims_.d2;
  if (b.rows() != d2 || b.cols() != d2) {
    throw Error(ErrorCode::DimensionMismatch, "argument must act on the second factor");
  }
  ComplexVector vb(d2 * d2);
  for (Index l = 0; l < d2; ++l)
    for (Index k = 0; k < d2; ++k) vb[l * d2 + k] = b(l, k);
  const ComplexVector vout = action_ * vb;
  ComplexMatrix out(d1, d1);
  for (Index a = 0; a < d1; ++a)
    for (Index c = 0; c < d1; ++c) out(a, c) = vout[a * d1 + c];
  return out;
}

EntanglementMap entanglement_mapping(const DensityMatrix& rho) {
  const BipartiteDims dims = rho.bipartite();
  const Index d1 = dims.d1;
  const Index d2 = dims.d2;
  // Pairing the duality with matrix units A = E_ca, B = E_lk gives
  // phi(E_lk)(a, c) = omega(E_ca (x) E_lk) = rho(a*d2 + k, c*d2 + l).
  ComplexMatrix action(d1 * d1, d2 * d2);
  for (Index a = 0; a < d1; ++a)
    for (Index c = 0; c < d1; ++c)
      for (Index l = 0; l < d2; ++l)
        for (Index k = 0; k < d2; ++k)
          action(a * d1 + c, l * d2 + k) = rho.matrix()(a * d2 + k, c * d2 + l);
  return EntanglementMap(dims, std::move(action));
}

ComplexMatrix choi_matrix(const EntanglementMap& map) {
  const Index d1 = map.dims().d1;
  const Index d2 = map.dims().d2;
  ComplexMatrix choi(d1 * d2, d1 * d2);
  ComplexMatrix unit = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d2; ++i) {
    for (Index j = 0; j < d2; ++j) {
      unit(i, j) = 1.0;
      choi.block(i * d1, j * d1, d1, d1) = map.apply(unit);
      unit(i, j) = 0.0;
    }
  }
  return choi;
}

PptVerdict cp_cocp_verdict(const EntanglementMap& map) {
  const Index d1 = map.dims().d1;
  const Index d2 = map.dims().d2;
  const ComplexMatrix choi = choi_matrix(map);
  ComplexMatrix block_transposed(choi.rows(), choi.cols());
  for (Index i = 0; i < d2; ++i)
    for (Index j = 0; j < d2; ++j)
      block_transposed.block(i * d1, j * d1, d1, d1) = choi.block(j * d1, i * d1, d1, d1);
  const double cp_min = min_eigenvalue(choi);
  const double cocp_min = min_eigenvalue(block_transposed);
  const double floor = psd_floor();
  return PptVerdict{cp_min >= -floor && cocp_min >= -floor, cp_min, cp_min, cocp_min};
}

}  // namespace qcorr
