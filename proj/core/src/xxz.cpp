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

#include "qcorr/xxz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <string>

#include "qcorr/entanglement.hpp"
#include "qcorr/qmat_io.hpp"

namespace qcorr {

BipartiteDims ChainConfig::dims() const {
  const int c = effective_cut();
  return {Index{1} << c, Index{1} << (sites - c)};
}

void ChainConfig::validate() const {
  if (sites < 2) throw Error(ErrorCode::BadConfig, "chain needs at least 2 sites");
  if (sites > kMaxSites) {
    throw Error(ErrorCode::DimensionCap,
                "2^" + std::to_string(sites) + " exceeds the 2^" + std::to_string(kMaxSites) + " cap");
  }
  if (!std::isfinite(beta) || beta < 0.0) throw Error(ErrorCode::BadConfig, "beta must be >= 0");
  if (!std::isfinite(delta)) throw Error(ErrorCode::BadConfig, "delta must be finite");
  const auto [k, l] = swap_pair;
  if (k < 0 || l >= sites || k >= l) {
    throw Error(ErrorCode::BadPair, "swap pair must satisfy 0 <= k < l < sites");
  }
  const int c = effective_cut();
  if (c < 1 || c >= sites) throw Error(ErrorCode::BadConfig, "cut must be strictly interior");
}

SuperOperator::SuperOperator(Index dim, ComplexMatrix action, Kind kind)
    : dim_(dim), action_(std::move(action)), kind_(kind) {
  if (action_.rows() != dim * dim || action_.cols() != dim * dim) {
    throw Error(ErrorCode::DimensionMismatch, "superoperator action must be d^2 x d^2");
  }
}

ComplexMatrix SuperOperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "operand dimension differs from superoperator");
  }
  return unvectorize(action_ * vectorize(x), dim_);
}

ComplexVector vectorize(const ComplexMatrix& x) {
  ComplexVector v(x.size());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) v[i * x.cols() + j] = x(i, j);
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, Index dim) {
  ComplexMatrix x(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) x(i, j) = v[i * dim + j];
  return x;
}

namespace {

ComplexMatrix site_operator(int sites, int site, const ComplexMatrix& op) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < sites; ++s) {
    out = kron(out, s == site ? op : ComplexMatrix::Identity(2, 2));
  }
  return out;
}

// Column/row index permutation of the swap superoperator on vec(A):
// vec(S A S)[i * d + j] = vec(A)[pi(i) * d + pi(j)].
std::vector<Index> swap_vec_permutation(const ChainConfig& cfg) {
  const Index d = cfg.dim();
  const int bk = cfg.sites - 1 - cfg.swap_pair.first;
  const int bl = cfg.sites - 1 - cfg.swap_pair.second;
  std::vector<Index> basis(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    const Index xk = (i >> bk) & 1;
    const Index xl = (i >> bl) & 1;
    Index j = i & ~((Index{1} << bk) | (Index{1} << bl));
    j |= (xk << bl) | (xl << bk);
    basis[static_cast<std::size_t>(i)] = j;
  }
  std::vector<Index> perm(static_cast<std::size_t>(d * d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      perm[static_cast<std::size_t>(i * d + j)] = basis[i] * d + basis[j];
  return perm;
}

}  // namespace

HermitianOperator xxz_hamiltonian(const ChainConfig& cfg) {
  cfg.validate();
  const Index d = cfg.dim();
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  const ComplexMatrix s1 = pauli(1), s2 = pauli(2), s3 = pauli(3);
  for (int n = 1; n < cfg.sites; ++n) {
    h -= site_operator(cfg.sites, n - 1, s1) * site_operator(cfg.sites, n, s1);
    h -= site_operator(cfg.sites, n - 1, s2) * site_operator(cfg.sites, n, s2);
    h -= cfg.delta * site_operator(cfg.sites, n - 1, s3) * site_operator(cfg.sites, n, s3);
  }
  return HermitianOperator(h);
}

DensityMatrix gibbs_state(const HermitianOperator& h, double beta,
                          std::optional<BipartiteDims> dims) {
  if (!std::isfinite(beta) || beta < 0.0) throw Error(ErrorCode::BadConfig, "beta must be >= 0");
  if (beta == 0.0) return DensityMatrix::maximally_mixed(h.dim(), dims);
  const SpectralDecomposition sd = hermitian_eig(h);
  // Shift by the ground energy so large beta does not underflow.
  const double e0 = sd.eigenvalues[0];
  const RealVector weights = (-beta * (sd.eigenvalues.array() - e0)).exp();
  const ComplexMatrix unnormalized =
      sd.eigenvectors * weights.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
  return DensityMatrix(hermitian_part(unnormalized / weights.sum()), dims);
}

ComplexMatrix swap_unitary(int sites, int k, int l) {
  ChainConfig cfg;
  cfg.sites = sites;
  cfg.swap_pair = {k, l};
  cfg.cut = 1;
  cfg.validate();
  const Index d = cfg.dim();
  const int bk = sites - 1 - k;
  const int bl = sites - 1 - l;
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const Index xk = (i >> bk) & 1;
    const Index xl = (i >> bl) & 1;
    Index j = i & ~((Index{1} << bk) | (Index{1} << bl));
    j |= (xk << bl) | (xl << bk);
    s(j, i) = 1.0;
  }
  return s;
}

SuperOperator swap_superop(const ChainConfig& cfg) {
  cfg.validate();
  const Index d = cfg.dim();
  const auto perm = swap_vec_permutation(cfg);
  ComplexMatrix action = ComplexMatrix::Zero(d * d, d * d);
  for (Index r = 0; r < d * d; ++r) action(r, perm[static_cast<std::size_t>(r)]) = 1.0;
  return SuperOperator(d, std::move(action), SuperOperator::Kind::PsiSwap);
}

SuperOperator tau_superop(const ChainConfig& cfg) {
  const SuperOperator psi = swap_superop(cfg);
  const Index n = psi.action().rows();
  ComplexMatrix action = 0.5 * (ComplexMatrix::Identity(n, n) + psi.action());
  return SuperOperator(psi.dim(), std::move(action), SuperOperator::Kind::Tau);
}

ComplexMatrix gamma_operator(const DensityMatrix& rho_gibbs, const SuperOperator& tau) {
  const ComplexMatrix tau_rho = tau.apply(rho_gibbs.matrix());
  const HermitianOperator root_rho = matrix_function(rho_gibbs.op(), MatrixFunction::sqrt());
  const HermitianOperator root_tau_rho =
      matrix_function(HermitianOperator(tau_rho), MatrixFunction::sqrt());
  return root_rho.matrix() * root_tau_rho.matrix();
}

JumpMaps jump_maps(const ChainConfig& cfg) {
  cfg.validate();
  const Index d = cfg.dim();
  const Index n = d * d;
  const DensityMatrix rho = gibbs_state(xxz_hamiltonian(cfg), cfg.beta, cfg.dims());
  const SuperOperator tau = tau_superop(cfg);
  ComplexMatrix gamma = gamma_operator(rho, tau);
  const auto perm = swap_vec_permutation(cfg);

  // E^d = (gamma (x) conj(gamma)) T and E = T (gamma* (x) gamma^T), where
  // T = (1 + P)/2 and P is the swap permutation on vectorized operators.
  const ComplexMatrix conj_side = kron(gamma, gamma.conjugate());
  ComplexMatrix ed(n, n);
  for (Index c = 0; c < n; ++c) {
    ed.col(c) = 0.5 * (conj_side.col(c) + conj_side.col(perm[static_cast<std::size_t>(c)]));
  }
  // P is an involution, so P^T = P and column c of P picks row perm[c].
  const ComplexMatrix heis_side = kron(gamma.adjoint(), gamma.transpose());
  ComplexMatrix e(n, n);
  for (Index r = 0; r < n; ++r) {
    e.row(r) = 0.5 * (heis_side.row(r) + heis_side.row(perm[static_cast<std::size_t>(r)]));
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix l = e - id;
  ComplexMatrix ld = ed - id;
  return JumpMaps{SuperOperator(d, std::move(e), SuperOperator::Kind::HeisenbergE),
                  SuperOperator(d, std::move(ed), SuperOperator::Kind::DualEd),
                  SuperOperator(d, std::move(l), SuperOperator::Kind::GeneratorL),
                  SuperOperator(d, std::move(ld), SuperOperator::Kind::DualGenerator),
                  std::move(gamma)};
}

DensityMatrix chain_basis_state(const ChainConfig& cfg, std::string_view bits) {
  cfg.validate();
  if (static_cast<int>(bits.size()) != cfg.sites) {
    throw Error(ErrorCode::DimensionMismatch, "bit string length differs from site count");
  }
  Index index = 0;
  for (char b : bits) {
    if (b != '0' && b != '1') throw Error(ErrorCode::BadConfig, "bit string must be 0/1");
    index = (index << 1) | (b == '1' ? 1 : 0);
  }
  ComplexVector psi = ComplexVector::Zero(cfg.dim());
  psi[index] = 1.0;
  return DensityMatrix::pure(psi, cfg.dims());
}

double m_a_raw(const ComplexMatrix& sigma, BipartiteDims dims) {
  const ComplexMatrix r = partial_trace(sigma, dims, Subsystem::Second);
  return r.trace().real() - r.cwiseAbs2().sum();
}

std::string_view to_string(EvolutionMode mode) {
  return mode == EvolutionMode::ExactSemigroup ? "exact-semigroup" : "euler-first-order";
}

ComplexVector apply_exponential(const ComplexMatrix& generator, const ComplexVector& v, double t) {
  const double norm1 = generator.cwiseAbs().colwise().sum().maxCoeff();
  const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm1)));
  const double h = t / substeps;
  ComplexVector out = v;
  for (int s = 0; s < substeps; ++s) {
    ComplexVector term = out;
    ComplexVector acc = out;
    const double scale = std::max(acc.cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 1; k <= 64; ++k) {
      term = (h / k) * (generator * term);
      acc += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-18 * scale) break;
    }
    out = std::move(acc);
  }
  return out;
}

ProductionSeries evolve(const ChainConfig& cfg, const JumpMaps& maps, const DensityMatrix& sigma0,
                        const EvolveOptions& options) {
  cfg.validate();
  const BipartiteDims dims = cfg.dims();
  const Index d = cfg.dim();
  if (sigma0.dim() != d) throw Error(ErrorCode::DimensionMismatch, "initial state dimension");
  if (options.steps < 1) throw Error(ErrorCode::BadConfig, "steps must be >= 1");
  if (!(options.tmax > 0.0) || !std::isfinite(options.tmax)) {
    throw Error(ErrorCode::BadConfig, "tmax must be > 0");
  }
  const double h = options.tmax / options.steps;
  if (options.mode == EvolutionMode::EulerFirstOrder && h >= 1.0) {
    throw Error(ErrorCode::StepTooLarge, "euler step h = " + format_double(h) + " must be < 1");
  }

  ProductionSeries series;
  series.mode = options.mode;
  const double ma0 = m_a_raw(sigma0.matrix(), dims);
  series.times.push_back(0.0);
  series.ea_values.push_back(0.0);
  series.ma_values.push_back(ma0);
  series.trace_drift.push_back(0.0);
  if (options.keep_states) series.states.push_back(sigma0.matrix());

  ComplexVector state = vectorize(sigma0.matrix());
  for (int n = 1; n <= options.steps; ++n) {
    if (options.mode == EvolutionMode::ExactSemigroup) {
      state = apply_exponential(maps.ld.action(), state, h);
    } else {
      state = (1.0 - h) * state + h * (maps.ed.action() * state);
    }
    ComplexMatrix sigma = unvectorize(state, d);
    const double trace = sigma.trace().real();
    // Drift of this step alone: the previous state had unit trace when renormalizing.
    series.trace_drift.push_back(std::abs(trace - 1.0));
    if (options.renormalize) {
      sigma /= trace;
      state /= trace;
    }
    const double ma = m_a_raw(sigma, dims);
    series.times.push_back(n * h);
    series.ma_values.push_back(ma);
    series.ea_values.push_back(ma - ma0);
    if (options.keep_states) series.states.push_back(std::move(sigma));
  }
  return series;
}

ProductionSeries evolve(const ChainConfig& cfg, const DensityMatrix& sigma0,
                        const EvolveOptions& options) {
  return evolve(cfg, jump_maps(cfg), sigma0, options);
}

ProductionExperiment production_experiment(const ChainConfig& cfg, const DensityMatrix& sigma0,
                                           const ProductionSchedule& schedule) {
  EvolveOptions options = schedule.evolve;
  options.keep_states = options.keep_states || !schedule.eof_samples.empty();
  ProductionExperiment out;
  out.series = evolve(cfg, sigma0, options);
  const ProductionSeries& s = out.series;

  ProductionSummary& sum = out.summary;
  sum.first_time = s.times[1];
  sum.ea_over_t = s.ea_values[1] / s.times[1];
  sum.sign = (sum.ea_over_t > 0.0) - (sum.ea_over_t < 0.0);
  sum.sites = cfg.sites;
  sum.beta = cfg.beta;
  sum.delta = cfg.delta;
  sum.swap_pair = cfg.swap_pair;
  sum.cut = cfg.effective_cut();
  sum.max_trace_drift = *std::max_element(s.trace_drift.begin(), s.trace_drift.end());

  if (!schedule.eof_samples.empty()) {
    const BipartiteDims dims = cfg.dims();
    const bool pure0 = sigma0.purity() > 1.0 - 1e-10;
    const double m0 = pure0 ? m_a(sigma0.with_dims(dims))
                            : eof(sigma0.with_dims(dims), EntropyFunctional::linear(),
                                  schedule.eof_settings).value;
    for (std::size_t idx : schedule.eof_samples) {
      if (idx >= s.times.size()) throw Error(ErrorCode::BadConfig, "eof sample index out of range");
      const DensityMatrix st = DensityMatrix::normalized(hermitian_part(s.states[idx]), dims);
      const double m = eof(st, EntropyFunctional::linear(), schedule.eof_settings).value;
      EofSample sample;
      sample.index = idx;
      sample.time = s.times[idx];
      sample.eof_linear = m;
      sample.production = m - m0;
      sample.ea = m_a(st) - m_a(sigma0.with_dims(dims));
      sample.bound_holds = sample.production <= sample.ea + schedule.inequality_slack;
      out.eof.push_back(sample);
    }
    if (!schedule.evolve.keep_states) out.series.states.clear();
  }
  return out;
}

std::string production_csv(const ProductionSeries& series) {
  std::ostringstream out;
  out << "t,ea,ma,trace_drift\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_double(series.times[i]) << ',' << format_double(series.ea_values[i]) << ','
        << format_double(series.ma_values[i]) << ',' << format_double(series.trace_drift[i])
        << '\n';
  }
  return out.str();
}

void write_production_csv(const std::filesystem::path& path, const ProductionSeries& series) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string());
    out << production_csv(series);
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename to " + path.string());
  }
}

std::vector<SweepJob> run_sweep(const ChainConfig& base, const SweepGrid& grid,
                                std::string_view initial_bits, const ProductionSchedule& schedule,
                                int threads) {
  std::vector<ChainConfig> configs;
  for (double beta : grid.betas) {
    for (double delta : grid.deltas) {
      for (const auto& pair : grid.swap_pairs) {
        ChainConfig cfg = base;
        cfg.beta = beta;
        cfg.delta = delta;
        cfg.swap_pair = pair;
        cfg.validate();
        configs.push_back(cfg);
      }
    }
  }
  const std::string bits(initial_bits);
  auto run_one = [&](const ChainConfig& cfg) {
    return SweepJob{cfg, production_experiment(cfg, chain_basis_state(cfg, bits), schedule)};
  };
  std::vector<SweepJob> jobs;
  jobs.reserve(configs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t first = 0; first < configs.size(); first += width) {
    const std::size_t last = std::min(configs.size(), first + width);
    if (width == 1) {
      jobs.push_back(run_one(configs[first]));
      continue;
    }
    std::vector<std::future<SweepJob>> pending;
    for (std::size_t i = first; i < last; ++i) {
      pending.push_back(std::async(std::launch::async, run_one, std::cref(configs[i])));
    }
    for (auto& p : pending) jobs.push_back(p.get());
  }
  return jobs;
}

}  // namespace qcorr
