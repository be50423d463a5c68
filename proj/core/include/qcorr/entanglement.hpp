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

#include "qcorr/bipartite.hpp"
#include "qcorr/ensemble_search.hpp"

namespace qcorr {

/// Concave, non-negative functional on density matrices vanishing exactly on
/// pure states.
struct EntropyFunctional {
  enum class Kind { VonNeumann, Linear };

  Kind kind = Kind::VonNeumann;

  static EntropyFunctional von_neumann() { return {Kind::VonNeumann}; }
  static EntropyFunctional linear() { return {Kind::Linear}; }

  /// Value on a spectrum that sums to one. Natural log; 0 log 0 = 0.
  double of_spectrum(const RealVector& eigenvalues) const;
};

double entropy(const DensityMatrix& rho, EntropyFunctional f);

/// Linear entropy of the second-factor reduction, Tr[r - r^2] with r = Tr_1 sigma.
double m_a(const DensityMatrix& sigma);

struct EofResult {
  double value = 0.0;
  PureEnsemble best_ensemble;
  int restarts_used = 0;
  bool converged = false;
};

/// Entanglement of formation: the smallest average entropy of the
/// first-factor reductions over the searched pure-state decompositions.
/// An upper bound on the infimum; for f = linear it never exceeds m_a.
EofResult eof(const DensityMatrix& rho, EntropyFunctional f, const OptimizerSettings& opts);

struct PptVerdict {
  bool is_ppt = false;
  double min_pt_eigenvalue = 0.0;
  double choi_cp_min = 0.0;    // NaN when not computed (ppt_direct)
  double choi_cocp_min = 0.0;  // NaN when not computed (ppt_direct)
};

/// Verdict from the spectrum of the partial transpose.
PptVerdict ppt_direct(const DensityMatrix& rho);

/// The map phi: B(K) -> B(H) fixed by omega(A (x) B) = Tr_H[A phi(B)].
///
/// `action` sends the row-major vectorization of B (length d2^2) to that of
/// phi(B) (length d1^2).
class EntanglementMap {
 public:
  EntanglementMap(BipartiteDims dims, ComplexMatrix action);

  const BipartiteDims& dims() const noexcept { return dims_; }
  const ComplexMatrix& action() const noexcept { return action_; }

  ComplexMatrix apply(const ComplexMatrix& b) const;

 private:
  BipartiteDims dims_;
  ComplexMatrix action_;
};

EntanglementMap entanglement_mapping(const DensityMatrix& rho);

/// Block matrix [phi(E_ij)]_ij.
ComplexMatrix choi_matrix(const EntanglementMap& map);

/// CP iff the Choi matrix is PSD; co-CP iff its block-transpose is PSD.
/// min_pt_eigenvalue reports the CP side, which under the fixed basis
/// convention is a permutation of the partial transpose of the state.
PptVerdict cp_cocp_verdict(const EntanglementMap& map);

}  // namespace qcorr
