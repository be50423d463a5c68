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

// Jump-type dynamical semigroup of the open XXZ spin-1/2 chain.
//
// Sites are numbered 0..N; site 0 is the slowest tensor index. With rho the
// Gibbs state, psi the exchange of sites k and l, tau = (id + psi)/2 and
// gamma = rho^{1/2} (tau rho)^{1/2}:
//
//   E(A)    = tau(gamma* A gamma)        Heisenberg picture
//   E^d(s)  = gamma tau(s) gamma*        its trace dual
//   L = E - id,   L^d = E^d - id
//
// E(1) = tau(gamma* gamma) is not the identity in general, so L^d does not
// preserve the trace; evolve() renormalizes each step unless told otherwise
// and records the drift.

#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qcorr/bipartite.hpp"
#include "qcorr/ensemble_search.hpp"

namespace qcorr {

inline constexpr int kMaxSites = 6;

struct ChainConfig {
  int sites = 5;
  double beta = 1.0;
  double delta = 0.5;
  std::pair<int, int> swap_pair{1, 3};
  std::optional<int> cut;  // first subsystem = sites [0, cut); default ceil(sites / 2)

  int effective_cut() const { return cut.value_or((sites + 1) / 2); }
  Index dim() const { return Index{1} << sites; }
  BipartiteDims dims() const;

  /// Throws DimensionCap, BadPair or BadConfig.
  void validate() const;
};

/// Linear map on d x d operators acting on row-major vectorizations:
/// vec(A)[i * d + j] = A(i, j), so vec(X A Y) = (X (x) Y^T) vec(A).
class SuperOperator {
 public:
  enum class Kind { PsiSwap, Tau, HeisenbergE, DualEd, GeneratorL, DualGenerator };

  SuperOperator(Index dim, ComplexMatrix action, Kind kind);

  Index dim() const noexcept { return dim_; }
  const ComplexMatrix& action() const noexcept { return action_; }
  Kind kind() const noexcept { return kind_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;

 private:
  Index dim_;
  ComplexMatrix action_;
  Kind kind_;
};

ComplexVector vectorize(const ComplexMatrix& x);
ComplexMatrix unvectorize(const ComplexVector& v, Index dim);

/// H = -sum_{n=1}^{N} (s1 s1 + s2 s2 + delta s3 s3) on sites (n-1, n), open chain.
HermitianOperator xxz_hamiltonian(const ChainConfig& cfg);

/// Z^{-1} exp(-beta H).
DensityMatrix gibbs_state(const HermitianOperator& h, double beta,
                          std::optional<BipartiteDims> dims = std::nullopt);

/// Permutation unitary exchanging tensor slots k and l.
ComplexMatrix swap_unitary(int sites, int k, int l);

SuperOperator swap_superop(const ChainConfig& cfg);
SuperOperator tau_superop(const ChainConfig& cfg);

/// rho^{1/2} (tau rho)^{1/2}; generally not Hermitian.
ComplexMatrix gamma_operator(const DensityMatrix& rho_gibbs, const SuperOperator& tau);

struct JumpMaps {
  SuperOperator e;
  SuperOperator ed;
  SuperOperator l;
  SuperOperator ld;
  ComplexMatrix gamma;
};

JumpMaps jump_maps(const ChainConfig& cfg);

/// Computational basis state of the chain, e.g. "01010" (site 0 first).
DensityMatrix chain_basis_state(const ChainConfig& cfg, std::string_view bits);

/// M^a on a possibly unnormalized operator: Tr[r] - Tr[r^2], r = Tr_1 sigma.
double m_a_raw(const ComplexMatrix& sigma, BipartiteDims dims);

enum class EvolutionMode { ExactSemigroup, EulerFirstOrder };

std::string_view to_string(EvolutionMode mode);

struct EvolveOptions {
  double tmax = 0.1;
  int steps = 100;
  EvolutionMode mode = EvolutionMode::ExactSemigroup;
  bool renormalize = true;
  bool keep_states = false;
};

struct ProductionSeries {
  std::vector<double> times;
  std::vector<double> ea_values;    // M^a(sigma_t) - M^a(sigma_0)
  std::vector<double> ma_values;
  std::vector<double> trace_drift;  // |Tr sigma_t - 1| before renormalization
  EvolutionMode mode = EvolutionMode::ExactSemigroup;
  std::vector<ComplexMatrix> states;  // filled when keep_states is set
};

/// exp(t G) v by a scaled Taylor series, to machine precision.
ComplexVector apply_exponential(const ComplexMatrix& generator, const ComplexVector& v, double t);

ProductionSeries evolve(const ChainConfig& cfg, const JumpMaps& maps, const DensityMatrix& sigma0,
                        const EvolveOptions& options);
ProductionSeries evolve(const ChainConfig& cfg, const DensityMatrix& sigma0,
                        const EvolveOptions& options);

struct ProductionSchedule {
  EvolveOptions evolve;
  /// Sample indices (into the series) at which the EoF-based production
  /// E(t) = M(sigma_t) - M(sigma_0) is computed; empty to skip.
  std::vector<std::size_t> eof_samples;
  OptimizerSettings eof_settings;
  double inequality_slack = 1e-6;
};

struct EofSample {
  std::size_t index = 0;
  double time = 0.0;
  double eof_linear = 0.0;  // M(sigma_t), upper bound
  double production = 0.0;  // E(t)
  double ea = 0.0;          // E_a(t)
  bool bound_holds = false; // E(t) <= E_a(t) + slack
};

struct ProductionSummary {
  double first_time = 0.0;
  double ea_over_t = 0.0;  // E_a / t at the first sample after 0
  int sign = 0;            // sign of ea_over_t
  int sites = 0;
  double beta = 0.0;
  double delta = 0.0;
  std::pair<int, int> swap_pair{};
  int cut = 0;
  double max_trace_drift = 0.0;
};

struct ProductionExperiment {
  ProductionSeries series;
  ProductionSummary summary;
  std::vector<EofSample> eof;
};

ProductionExperiment production_experiment(const ChainConfig& cfg, const DensityMatrix& sigma0,
                                           const ProductionSchedule& schedule);

/// CSV with header `t,ea,ma,trace_drift`, 17 significant digits, written via
/// a temporary file and rename.
void write_production_csv(const std::filesystem::path& path, const ProductionSeries& series);
std::string production_csv(const ProductionSeries& series);

struct SweepGrid {
  std::vector<double> betas;
  std::vector<double> deltas;
  std::vector<std::pair<int, int>> swap_pairs;
};

struct SweepJob {
  ChainConfig cfg;
  ProductionExperiment result;
};

/// Runs one production experiment per grid point (row-major over
/// betas x deltas x swap_pairs). `threads` > 1 runs jobs concurrently; the
/// output order does not depend on it.
std::vector<SweepJob> run_sweep(const ChainConfig& base, const SweepGrid& grid,
                                std::string_view initial_bits, const ProductionSchedule& schedule,
                                int threads = 1);

}  // namespace qcorr
