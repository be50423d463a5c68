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

#include "qcorr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace qcorr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NegativeSpectrum: return "NegativeSpectrum";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::MissingDims: return "MissingDims";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::BadBasis: return "BadBasis";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::BadPair: return "BadPair";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double psd_floor() {
  static const double floor = [] {
    if (const char* env = std::getenv("QCORR_PSD_FLOOR")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && *end == '\0' && std::isfinite(v) && v >= 0.0) return v;
    }
    return kDefaultPsdFloor;
  }();
  return floor;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian operator must be square and non-empty");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  defect_ = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect_ > rel_tol * scale) {
    throw Error(ErrorCode::NonHermitian,
                "defect " + std::to_string(defect_) + " exceeds tolerance");
  }
  matrix_ = hermitian_part(m);
}

double HermitianOperator::expectation(const ComplexMatrix& rho) const {
  // Tr(rho M) = sum_ij rho_ij M_ji
  return (rho.transpose().cwiseProduct(matrix_)).sum().real();
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition hermitian_eig(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonHermitian, "eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

ComplexMatrix apply_spectral(const SpectralDecomposition& sd, const RealVector& values) {
  return sd.eigenvectors * values.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
}

RealVector clamped_sqrt(const RealVector& ev) {
  const double floor = psd_floor();
  RealVector out(ev.size());
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -floor) {
      throw Error(ErrorCode::NegativeSpectrum,
                  "eigenvalue " + std::to_string(ev[i]) + " below -psd_floor");
    }
    out[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return out;
}

}  // namespace

HermitianOperator matrix_function(const HermitianOperator& op, MatrixFunction f) {
  const SpectralDecomposition sd = hermitian_eig(op);
  RealVector values(sd.eigenvalues.size());
  switch (f.kind) {
    case MatrixFunction::Kind::Sqrt:
      values = clamped_sqrt(sd.eigenvalues);
      break;
    case MatrixFunction::Kind::Exp:
      values = sd.eigenvalues.array().exp();
      break;
    case MatrixFunction::Kind::NegExpScaled:
      values = (-f.beta * sd.eigenvalues.array()).exp();
      break;
  }
  return HermitianOperator(apply_spectral(sd, values));
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  SpectralDecomposition sd{solver.eigenvalues(), solver.eigenvectors()};
  return apply_spectral(sd, clamped_sqrt(sd.eigenvalues));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues().sum();
}

double operator_norm(const ComplexMatrix& m) {
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  return sv.size() == 0 ? 0.0 : sv[0];
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

ComplexMatrix pauli(int j) {
  ComplexMatrix p(2, 2);
  const Complex i1(0.0, 1.0);
  switch (j) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i1, i1, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::BadConfig, "Pauli index must be 0..3");
  }
  return p;
}

ComplexMatrix pauli_word(std::string_view word) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : word) {
    int j = 0;
    switch (c) {
      case 'I': case '0': j = 0; break;
      case 'X': case '1': j = 1; break;
      case 'Y': case '2': j = 2; break;
      case 'Z': case '3': j = 3; break;
      default:
        throw Error(ErrorCode::BadConfig, "bad Pauli letter '" + std::string(1, c) + "'");
    }
    out = kron(out, pauli(j));
  }
  return out;
}

}  // namespace qcorr
