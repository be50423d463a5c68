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

#include "qcorr/ensemble_search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <mutex>
#include <numeric>
#include <random>
#include <vector>

namespace qcorr {

std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart),
                    static_cast<std::uint32_t>(restart >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

namespace {

constexpr double kInitialStep = 0.5;
constexpr double kMinStep = 1e-10;

struct LocalResult {
  double value = 0.0;
  ComplexMatrix columns;
  bool converged = false;
};

PureEnsemble to_ensemble(const ComplexMatrix& columns, const std::optional<BipartiteDims>& dims) {
  std::vector<double> weights;
  std::vector<ComplexVector> comps;
  double total = 0.0;
  for (Index i = 0; i < columns.cols(); ++i) {
    const double w = columns.col(i).squaredNorm();
    if (w <= 1e-300) continue;
    weights.push_back(w);
    comps.push_back(columns.col(i) / std::sqrt(w));
    total += w;
  }
  for (double& w : weights) w /= total;
  return PureEnsemble(std::move(weights), std::move(comps), dims);
}

class LocalSearch {
 public:
  LocalSearch(const EnsembleObjective& objective, const OptimizerSettings& settings,
              const std::optional<BipartiteDims>& dims, std::mutex& probe_mutex)
      : objective_(objective), settings_(settings), dims_(dims), probe_mutex_(probe_mutex) {}

  LocalResult run(ComplexMatrix columns) const {
    const Index m = columns.cols();
    std::vector<double> terms(static_cast<std::size_t>(m));
    double weight = 0.0;
    for (Index i = 0; i < m; ++i) {
      terms[i] = objective_.contribution(columns.col(i));
      weight += columns.col(i).squaredNorm();
    }
    auto sum_terms = [&] { return std::accumulate(terms.begin(), terms.end(), 0.0); };
    double total = sum_terms();
    double value = objective_.value(total / weight);
    report(columns);

    LocalResult out;
    if (value <= settings_.zero_floor || m < 2) {
      out.value = value;
      out.columns = std::move(columns);
      out.converged = true;
      return out;
    }

    const Complex generators[2] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
    double step = kInitialStep;
    ComplexVector ci, ck;
    for (int sweep = 0; sweep < settings_.iteration_cap; ++sweep) {
      const double before = value;
      bool moved = false;
      for (Index i = 0; i < m; ++i) {
        for (Index k = i + 1; k < m; ++k) {
          for (const Complex& p : generators) {
            for (double sign : {1.0, -1.0}) {
              const double c = std::cos(sign * step);
              const double s = std::sin(sign * step);
              ci = c * columns.col(i) + (p * s) * columns.col(k);
              ck = (-std::conj(p) * s) * columns.col(i) + c * columns.col(k);
              const double ti = objective_.contribution(ci);
              const double tk = objective_.contribution(ck);
              const double trial_total = total - terms[i] - terms[k] + ti + tk;
              const double trial = objective_.value(trial_total / weight);
              if (trial < value) {
                columns.col(i) = ci;
                columns.col(k) = ck;
                terms[i] = ti;
                terms[k] = tk;
                total = trial_total;
                value = trial;
                moved = true;
                report(columns);
                break;
              }
            }
          }
        }
      }
      total = sum_terms();
      value = objective_.value(total / weight);
      if (value <= settings_.zero_floor) {
        out.converged = true;
        break;
      }
      const double gain = (before - value) / std::max(std::abs(before), 1e-300);
      if (!moved || gain < settings_.tolerance) step *= 0.5;
      if (step < kMinStep) {
        out.converged = true;
        break;
      }
    }
    out.value = value;
    out.columns = std::move(columns);
    return out;
  }

 private:
  void report(const ComplexMatrix& columns) const {
    if (!settings_.probe) return;
    std::lock_guard<std::mutex> lock(probe_mutex_);
    settings_.probe(to_ensemble(columns, dims_));
  }

  const EnsembleObjective& objective_;
  const OptimizerSettings& settings_;
  const std::optional<BipartiteDims>& dims_;
  std::mutex& probe_mutex_;
};

ComplexMatrix warm_columns(const PureEnsemble& warm, const DensityMatrix& rho) {
  if (warm.ambient_dim() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "warm start dimension differs from state");
  }
  if (warm.barycenter_error(rho.matrix()) > 1e-8) {
    throw Error(ErrorCode::BadWeights, "warm start barycenter differs from the state");
  }
  ComplexMatrix cols(rho.dim(), static_cast<Index>(warm.size()));
  for (std::size_t i = 0; i < warm.size(); ++i) {
    cols.col(static_cast<Index>(i)) = std::sqrt(warm.weights()[i]) * warm.components()[i];
  }
  return cols;
}

}  // namespace

double evaluate_ensemble(const PureEnsemble& ensemble, const EnsembleObjective& objective) {
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    total += objective.contribution(std::sqrt(ensemble.weights()[i]) * ensemble.components()[i]);
  }
  return objective.value(total);
}

EnsembleSearchResult minimize_over_ensembles(const DensityMatrix& rho,
                                             const EnsembleObjective& objective,
                                             const OptimizerSettings& settings) {
  if (settings.restarts < 1) throw Error(ErrorCode::BadConfig, "restarts must be >= 1");
  if (settings.iteration_cap < 0) throw Error(ErrorCode::BadConfig, "iteration cap must be >= 0");
  const RangeFactor range = range_factor(rho);
  const Index r = range.rank();
  const Index cap = std::max(r, settings.max_ensemble_size.value_or(default_ensemble_cap(r)));
  const Index span = cap - r + 1;

  std::mutex probe_mutex;
  const LocalSearch search(objective, settings, rho.dims(), probe_mutex);

  auto start_columns = [&](int k) -> ComplexMatrix {
    if (k == 0) {
      return settings.warm_start ? warm_columns(*settings.warm_start, rho) : range.scaled;
    }
    const Index m = r + static_cast<Index>(k - 1) % span;
    std::mt19937_64 rng(restart_seed(settings.seed, static_cast<std::uint64_t>(k)));
    return range.scaled * random_isometry(m, r, rng).transpose();
  };

  std::optional<LocalResult> best;
  int used = 0;
  const int threads = std::max(1, settings.threads);
  bool done = false;
  for (int first = 0; first < settings.restarts && !done; first += threads) {
    const int last = std::min(settings.restarts, first + threads);
    std::vector<LocalResult> batch;
    if (threads == 1) {
      batch.push_back(search.run(start_columns(first)));
    } else {
      std::vector<std::future<LocalResult>> jobs;
      for (int k = first; k < last; ++k) {
        jobs.push_back(std::async(std::launch::async,
                                  [&, k] { return search.run(start_columns(k)); }));
      }
      for (auto& j : jobs) batch.push_back(j.get());
    }
    for (int k = first; k < last; ++k) {
      LocalResult& res = batch[static_cast<std::size_t>(k - first)];
      used = k + 1;
      if (!best || res.value < best->value) best = std::move(res);
      if (best->value <= settings.zero_floor) {
        done = true;
        break;
      }
    }
  }

  return EnsembleSearchResult{best->value, to_ensemble(best->columns, rho.dims()), used,
                              best->converged};
}

}  // namespace qcorr
