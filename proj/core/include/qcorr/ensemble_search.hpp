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

// Minimization over finite pure-state decompositions of a fixed state.
//
// An ensemble of size m for a state of rank r is the set of columns of
// W U^T, where W holds sqrt(lambda_j) v_j and U is an m x r isometry. Every
// decomposition arises this way. The search runs seeded random restarts
// (U from the QR factor of a complex Gaussian matrix) and refines each one by
// a compass search over Givens rotations between pairs of components, which
// keeps the barycenter fixed. Both correlation and entanglement measures use
// it with different objectives.

#include <cstdint>
#include <functional>
#include <optional>

#include "qcorr/bipartite.hpp"

namespace qcorr {

struct OptimizerSettings {
  int restarts = 64;
  std::optional<Index> max_ensemble_size;  // defaults to rank^2
  std::uint64_t seed = 0;
  int iteration_cap = 2000;                // sweeps per restart
  double tolerance = 1e-10;                // relative improvement per sweep
  double zero_floor = 1e-14;               // values at or below count as zero
  int threads = 1;
  /// Evaluated as restart 0 instead of the spectral ensemble. Its barycenter
  /// must match the state within 1e-8 in trace norm.
  std::optional<PureEnsemble> warm_start;
  /// Called with every accepted ensemble (serialized across threads).
  std::function<void(const PureEnsemble&)> probe;
};

/// Objective that is a function of a sum of per-component terms.
class EnsembleObjective {
 public:
  virtual ~EnsembleObjective() = default;

  /// Term for one unnormalized component psi~ (its weight is |psi~|^2).
  virtual double contribution(const ComplexVector& psi) const = 0;

  /// Value to minimize given the summed terms, already divided by the total
  /// weight of the ensemble.
  virtual double value(double mean) const { return mean; }
};

struct EnsembleSearchResult {
  double value = 0.0;
  PureEnsemble best_ensemble;
  int restarts_used = 0;
  bool converged = false;
};

EnsembleSearchResult minimize_over_ensembles(const DensityMatrix& rho,
                                             const EnsembleObjective& objective,
                                             const OptimizerSettings& settings);

/// Value of `objective` on a given ensemble, no search.
double evaluate_ensemble(const PureEnsemble& ensemble, const EnsembleObjective& objective);

/// Haar-like random m x r isometry (first r columns of the Q factor of a
/// complex Gaussian m x m matrix).
template <class Rng>
ComplexMatrix random_isometry(Index m, Index r, Rng& rng);

/// Deterministic per-restart generator seeded from (seed, restart).
std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t restart);

}  // namespace qcorr

#include "qcorr/detail/random_isometry.hpp"
