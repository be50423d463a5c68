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

#include <benchmark/benchmark.h>

#include <random>

#include "qcorr/bipartite.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/xxz.hpp"

namespace {

using namespace qcorr;

DensityMatrix random_state(BipartiteDims dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  ComplexMatrix g(dims.total(), dims.total());
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(n(rng), n(rng));
  const ComplexMatrix m = g * g.adjoint();
  return DensityMatrix(m / m.trace().real(), dims);
}

void BM_HermitianEig(benchmark::State& state) {
  const Index d = state.range(0);
  const DensityMatrix rho = random_state({d, 1}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(rho.op()));
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(16)->Arg(32)->Arg(64);

void BM_PptDirect(benchmark::State& state) {
  const Index d = state.range(0);
  const DensityMatrix rho = random_state({d, d}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ppt_direct(rho));
}
BENCHMARK(BM_PptDirect)->Arg(2)->Arg(3)->Arg(4);

void BM_CpCocpVerdict(benchmark::State& state) {
  const Index d = state.range(0);
  const DensityMatrix rho = random_state({d, d}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cp_cocp_verdict(entanglement_mapping(rho)));
}
BENCHMARK(BM_CpCocpVerdict)->Arg(2)->Arg(3)->Arg(4);

void BM_EofLinear(benchmark::State& state) {
  // Entangled Werner state, so the search never stops early at zero.
  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const DensityMatrix rho(0.6 * bell + 0.1 * ComplexMatrix::Identity(4, 4), BipartiteDims{2, 2});
  OptimizerSettings opts;
  opts.seed = 5;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eof(rho, EntropyFunctional::linear(), opts));
}
BENCHMARK(BM_EofLinear)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Dqc(benchmark::State& state) {
  const DensityMatrix rho = random_state({2, 2}, 6);
  const HermitianOperator a(pauli_word("XX") + pauli_word("ZY"));
  OptimizerSettings opts;
  opts.seed = 7;
  opts.restarts = 8;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quantum_correlation_distance(rho, a, opts));
}
BENCHMARK(BM_Dqc)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_JumpMaps(benchmark::State& state) {
  ChainConfig cfg;
  cfg.sites = static_cast<int>(state.range(0));
  cfg.swap_pair = {0, cfg.sites - 1};
  for (auto _ : state) benchmark::DoNotOptimize(jump_maps(cfg));
}
BENCHMARK(BM_JumpMaps)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_EvolveStep(benchmark::State& state) {
  ChainConfig cfg;
  const JumpMaps maps = jump_maps(cfg);
  const DensityMatrix s0 = chain_basis_state(cfg, "01010");
  EvolveOptions opts;
  opts.tmax = 1e-3;
  opts.steps = 1;
  opts.mode = state.range(0) ? EvolutionMode::ExactSemigroup : EvolutionMode::EulerFirstOrder;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(cfg, maps, s0, opts));
}
BENCHMARK(BM_EvolveStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
