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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Usage: qcorr_acceptance [path-to-qcorr-binary]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/bipartite.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/qmat_io.hpp"
#include "qcorr/xxz.hpp"
#include "test_support.hpp"

using namespace qcorr;
using namespace qcorr::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

OptimizerSettings settings(std::uint64_t seed, int restarts) {
  OptimizerSettings s;
  s.seed = seed;
  s.restarts = restarts;
  return s;
}

// Mixed family with both PPT and NPT members.
DensityMatrix ppt_test_state(BipartiteDims dims, int k, Rng& rng) {
  switch (k % 3) {
    case 0:
      return random_bipartite_state(dims, rng);
    case 1:
      return random_separable(dims, 1 + k % 5, rng).state;
    default: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double p = u(rng);
      const ComplexVector psi = random_unit_vector(dims.total(), rng);
      const ComplexMatrix m = p * psi * psi.adjoint() +
                              (1.0 - p) * ComplexMatrix::Identity(dims.total(), dims.total()) / double(dims.total());
      return DensityMatrix(m, dims);
    }
  }
}

Outcome ppt_oracle_equivalence() {
  Rng rng(1001);
  int states = 0, npt = 0, verdict_mismatch = 0;
  double worst = 0.0;
  for (const BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}, BipartiteDims{3, 3}}) {
    for (int k = 0; k < 200; ++k) {
      const DensityMatrix rho = ppt_test_state(dims, k, rng);
      const PptVerdict direct = ppt_direct(rho);
      const PptVerdict mapped = cp_cocp_verdict(entanglement_mapping(rho));
      verdict_mismatch += direct.is_ppt != mapped.is_ppt;
      worst = std::max(worst, std::abs(direct.min_pt_eigenvalue - mapped.min_pt_eigenvalue));
      npt += !direct.is_ppt;
      ++states;
    }
  }
  return {verdict_mismatch == 0 && worst <= 1e-9,
          std::to_string(states) + " states (" + std::to_string(npt) + " NPT), verdict mismatches " +
              std::to_string(verdict_mismatch) + ", max eigenvalue gap " + num(worst)};
}

Outcome singlet_benchmarks() {
  const DensityMatrix singlet = max_entangled(2, MaxEntangledVariant::Singlet);
  const double pt = ppt_direct(singlet).min_pt_eigenvalue;
  const double d = quantum_correlation_distance(singlet, HermitianOperator(pauli_word("ZZ")), settings(7, 8)).value;
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  const double cq = quantum_correlation_coefficient(singlet, HermitianOperator(p0), HermitianOperator(p0)).value;
  const double ma = m_a(singlet);
  const double eofl = eof(singlet, EntropyFunctional::linear(), settings(7, 8)).value;
  const bool ok = std::abs(pt + 0.5) <= 1e-10 && std::abs(d - 1.0) <= 1e-9 && std::abs(std::abs(cq) - 1.0) <= 1e-10 &&
                  std::abs(ma - 0.5) <= 1e-9 && std::abs(eofl - 0.5) <= 1e-9;
  return {ok, "min PT eigenvalue " + format_double(pt) + ", d(ZZ) " + format_double(d) + ", C_q " +
                  format_double(cq) + ", M^a " + format_double(ma) + ", EoF_linear " + format_double(eofl)};
}

Outcome separability_zeroing() {
  Rng rng(1003);
  const auto family = pauli_product_family({2, 2});
  double worst_d = 0.0, worst_eof = 0.0;
  for (int k = 0; k < 50; ++k) {
    const SeparableSample s = random_separable({2, 2}, 2 + k % 4, rng);
    OptimizerSettings opts = settings(100 + k, 8);
    opts.warm_start = s.ensemble;
    const CorrelationProfile p = quantum_correlation_profile(s.state, family, opts);
    for (const auto& r : p.results) worst_d = std::max(worst_d, r.value);
    worst_eof = std::max(worst_eof, eof(s.state, EntropyFunctional::von_neumann(), opts).value);
    worst_eof = std::max(worst_eof, eof(s.state, EntropyFunctional::linear(), opts).value);
  }
  return {worst_d <= 1e-8 && worst_eof <= 1e-8,
          "50 states x 16 observables, max d " + num(worst_d) + ", max EoF " + num(worst_eof)};
}

Outcome kadison_ringrose() {
  const DensityMatrix bell = max_entangled(2);
  std::mutex mu;
  long probes = 0, violations = 0;
  double closest = std::numeric_limits<double>::infinity();
  Rng rng(1004);
  int run = 0;
  while (probes < 10000) {
    // Short searches so the probes come from many different states and observables.
    OptimizerSettings opts = settings(500 + run, 2);
    opts.iteration_cap = 25;
    opts.probe = [&](const PureEnsemble& ens) {
      const double dist = trace_norm(bell.matrix() - separable_shadow(ens).matrix());
      std::lock_guard<std::mutex> lock(mu);
      ++probes;
      violations += dist < 0.25;
      closest = std::min(closest, dist);
    };
    // Alternate between the Bell state itself and random mixed states.
    const DensityMatrix rho = run % 4 == 0 ? bell : random_bipartite_state({2, 2}, rng);
    const HermitianOperator a(random_hermitian(4, rng));
    (void)quantum_correlation_distance(rho, a, opts);
    ++run;
  }
  return {violations == 0, std::to_string(probes) + " probed shadows over " + std::to_string(run) +
                               " searches, violations " + std::to_string(violations) +
                               ", smallest trace-norm distance " + num(closest)};
}

Outcome inequality_suite() {
  // Evolution runs with pure product initial states.
  struct RunSpec {
    int sites;
    double beta, delta;
    std::pair<int, int> pair;
    const char* bits;
  };
  const RunSpec runs[] = {{3, 1.0, 0.5, {0, 2}, "010"}, {3, 5.0, 1.5, {0, 1}, "011"}, {4, 1.0, 0.5, {1, 3}, "0101"}};
  int checks = 0, failures = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const RunSpec& r : runs) {
    ChainConfig cfg;
    cfg.sites = r.sites;
    cfg.beta = r.beta;
    cfg.delta = r.delta;
    cfg.swap_pair = r.pair;
    ProductionSchedule sched;
    sched.evolve.tmax = 0.05;
    sched.evolve.steps = 5;
    sched.eof_samples = {1, 3, 5};
    sched.eof_settings = settings(17, 3);
    sched.eof_settings.iteration_cap = 200;
    const ProductionExperiment ex = production_experiment(cfg, chain_basis_state(cfg, r.bits), sched);
    for (const EofSample& e : ex.eof) {
      const double ma = ex.series.ma_values[e.index];
      checks += 2;
      failures += e.eof_linear > ma + 1e-6;
      failures += e.production > e.ea + 1e-6;
      worst_gap = std::max({worst_gap, e.eof_linear - ma, e.production - e.ea});
    }
  }
  // Convexity on random pairs with shared warm starts.
  Rng rng(1005);
  int convex_fail = 0;
  double worst_convex = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 50; ++k) {
    const BipartiteDims dims{2, 2};
    const DensityMatrix r1 = random_bipartite_state(dims, rng), r2 = random_bipartite_state(dims, rng);
    const EofResult e1 = eof(r1, EntropyFunctional::linear(), settings(2 * k, 3));
    const EofResult e2 = eof(r2, EntropyFunctional::linear(), settings(2 * k + 1, 3));
    const double lambda = (k % 3 + 1) * 0.25;
    std::vector<double> w;
    std::vector<ComplexVector> c;
    for (std::size_t i = 0; i < e1.best_ensemble.size(); ++i) {
      w.push_back(lambda * e1.best_ensemble.weights()[i]);
      c.push_back(e1.best_ensemble.components()[i]);
    }
    for (std::size_t i = 0; i < e2.best_ensemble.size(); ++i) {
      w.push_back((1.0 - lambda) * e2.best_ensemble.weights()[i]);
      c.push_back(e2.best_ensemble.components()[i]);
    }
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    OptimizerSettings opts = settings(1000 + k, 2);
    opts.warm_start = PureEnsemble(w, c, dims);
    const DensityMatrix mix(lambda * r1.matrix() + (1.0 - lambda) * r2.matrix(), dims);
    const double lhs = eof(mix, EntropyFunctional::linear(), opts).value;
    const double rhs = lambda * e1.value + (1.0 - lambda) * e2.value;
    convex_fail += lhs > rhs + 1e-6;
    worst_convex = std::max(worst_convex, lhs - rhs);
  }
  return {failures == 0 && convex_fail == 0,
          std::to_string(checks) + " evolution bound checks (" + std::to_string(failures) +
              " failed, max excess " + num(worst_gap) + "), 50 convexity pairs (" + std::to_string(convex_fail) +
              " failed, max excess " + num(worst_convex) + ")"};
}

double ea_at(const ChainConfig& cfg, const char* bits, double tmax, int steps, std::size_t index) {
  ProductionSchedule sched;
  sched.evolve.tmax = tmax;
  sched.evolve.steps = steps;
  return production_experiment(cfg, chain_basis_state(cfg, bits), sched).series.ea_values[index];
}

Outcome xxz_production() {
  ChainConfig base;  // 5 sites, beta 1, delta 0.5, swap (1, 3)
  const char* bits = "01010";
  ProductionSchedule sched;
  sched.evolve.tmax = 0.01;
  sched.evolve.steps = 10;
  const ProductionExperiment ex = production_experiment(base, chain_basis_state(base, bits), sched);
  const double rate = ex.summary.ea_over_t;
  const bool rate_ok = ex.summary.first_time == 1e-3 && rate > 0.0;

  std::vector<double> by_beta, by_delta;
  for (double beta : {0.1, 1.0, 5.0}) {
    ChainConfig c = base;
    c.beta = beta;
    by_beta.push_back(ea_at(c, bits, 0.01, 10, 10));
  }
  for (double delta : {0.5, 1.5}) {
    ChainConfig c = base;
    c.delta = delta;
    by_delta.push_back(ea_at(c, bits, 0.01, 10, 10));
  }
  double min_beta_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < by_beta.size(); ++i)
    for (std::size_t j = i + 1; j < by_beta.size(); ++j)
      min_beta_gap = std::min(min_beta_gap, std::abs(by_beta[i] - by_beta[j]));
  const double delta_gap = std::abs(by_delta[0] - by_delta[1]);
  return {rate_ok && min_beta_gap > 1e-6 && delta_gap > 1e-6,
          "initial |01010>, E_a(1e-3)/t = " + num(rate) + "; E_a(0.01) over beta {0.1,1,5}: " + num(by_beta[0]) +
              ", " + num(by_beta[1]) + ", " + num(by_beta[2]) + " (min gap " + num(min_beta_gap) +
              "); over delta {0.5,1.5}: " + num(by_delta[0]) + ", " + num(by_delta[1]) + " (gap " +
              num(delta_gap) + ")"};
}

Outcome dynamics_structure() {
  Rng rng(1007);
  double duality = 0.0, automorphism = 0.0, involution = 0.0, unital = 0.0, idempotent = 0.0, commute = 0.0;
  std::vector<ChainConfig> cfgs(4);
  cfgs[0].sites = 2, cfgs[0].swap_pair = {0, 1};
  cfgs[1].sites = 3, cfgs[1].swap_pair = {0, 2}, cfgs[1].beta = 2.0;
  cfgs[2].sites = 4, cfgs[2].swap_pair = {1, 3}, cfgs[2].delta = 1.5;
  // cfgs[3]: the default 5-site chain
  for (const ChainConfig& c : cfgs) {
    const Index d = c.dim();
    const JumpMaps maps = jump_maps(c);
    // Tr(E^d(E_ij) E_kl) = Tr(E_ij E(E_kl)) for all matrix units, read off the actions.
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k)
          for (Index l = 0; l < d; ++l) {
            const Complex lhs = maps.ed.action()(l * d + k, i * d + j);
            const Complex rhs = maps.e.action()(j * d + i, k * d + l);
            duality = std::max(duality, std::abs(lhs - rhs));
          }
    for (int rep = 0; rep < 20; ++rep) {
      const ComplexMatrix g = random_ginibre(d, d, rng);
      const ComplexMatrix sigma = g * g.adjoint() / (g * g.adjoint()).trace();
      const ComplexMatrix a = random_hermitian(d, rng);
      duality = std::max(duality, std::abs((maps.ed.apply(sigma) * a).trace() - (sigma * maps.e.apply(a)).trace()));
    }
    const SuperOperator psi = swap_superop(c), tau = tau_superop(c);
    for (int rep = 0; rep < 5; ++rep) {
      const ComplexMatrix x = random_ginibre(d, d, rng), y = random_ginibre(d, d, rng);
      automorphism = std::max(automorphism, max_abs(psi.apply(x * y) - psi.apply(x) * psi.apply(y)));
      involution = std::max(involution, max_abs(psi.apply(psi.apply(x)) - x));
      idempotent = std::max(idempotent, max_abs(tau.apply(tau.apply(x)) - tau.apply(x)));
    }
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    unital = std::max(unital, max_abs(tau.apply(eye) - eye));
    const HermitianOperator h = xxz_hamiltonian(c);
    const ComplexMatrix rho = gibbs_state(h, c.beta).matrix();
    commute = std::max(commute, (rho * h.matrix() - h.matrix() * rho).norm());
  }

  ChainConfig c3;
  c3.sites = 3;
  c3.swap_pair = {0, 2};
  const JumpMaps m3 = jump_maps(c3);
  const ComplexVector v = vectorize(chain_basis_state(c3, "010").matrix());
  const ComplexVector two = apply_exponential(m3.ld.action(), apply_exponential(m3.ld.action(), v, 0.04), 0.06);
  const ComplexVector one = apply_exponential(m3.ld.action(), v, 0.1);
  const double semigroup = (two - one).cwiseAbs().maxCoeff();

  ChainConfig c2;
  c2.sites = 2;
  c2.swap_pair = {0, 1};
  EvolveOptions exact;
  exact.tmax = 0.1;
  exact.steps = 1000;
  EvolveOptions euler = exact;
  euler.mode = EvolutionMode::EulerFirstOrder;
  const DensityMatrix s0 = chain_basis_state(c2, "01");
  const ProductionSeries a = evolve(c2, s0, exact), b = evolve(c2, s0, euler);
  double mode_gap = 0.0;
  for (std::size_t i = 0; i < a.ea_values.size(); ++i)
    mode_gap = std::max(mode_gap, std::abs(a.ea_values[i] - b.ea_values[i]));

  const bool ok = duality < 1e-10 && automorphism < 1e-10 && involution == 0.0 && unital < 1e-12 &&
                  idempotent < 1e-12 && commute < 1e-10 && semigroup < 1e-9 && mode_gap < 1e-3;
  return {ok, "duality " + num(duality) + ", psi automorphism " + num(automorphism) + ", psi^2-id " +
                  num(involution) + ", tau(1)-1 " + num(unital) + ", tau^2-tau " + num(idempotent) +
                  ", [rho,H] " + num(commute) + ", semigroup " + num(semigroup) + ", euler-exact " +
                  num(mode_gap)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& tool) {
  if (tool.empty()) return {false, "no qcorr binary given"};
  const fs::path dir = fs::temp_directory_path() / "qcorr_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto sh = [&](const std::string& args) {
    const std::string cmd = "\"" + tool + "\" " + args + " > \"" + (dir / "log.txt").string() + "\" 2>&1";
    return std::system(cmd.c_str());
  };
  auto p = [&](const std::string& name) { return "\"" + (dir / name).string() + "\""; };

  int failures = 0, pairs = 0;
  auto compare = [&](const std::string& a, const std::string& b) {
    ++pairs;
    const std::string x = slurp(dir / a), y = slurp(dir / b);
    failures += x.empty() || x != y;
  };
  if (sh("gibbs --sites 4 --beta 1 --out " + p("g.qmat")) != 0) return {false, "gibbs failed"};
  for (const char* suffix : {"1", "2"}) {
    const std::string s(suffix);
    sh("evolve --tmax 0.01 --steps 10 --out " + p("e" + s + ".csv"));
    sh("evolve --sites 4 --tmax 0.02 --steps 4 --eof-samples 2,4 --seed 42 --restarts 3 --out " +
       p("eof" + s + ".csv"));
    sh("measure --state " + p("g.qmat") + " --measure eof --seed 42 --restarts 3 --threads " + s + " --out " +
       p("m" + s + ".csv"));
    sh("measure --state " + p("g.qmat") + " --measure dqc --observable pauli:XXZZ --seed 42 --restarts 3 --out " +
       p("d" + s + ".csv"));
    sh("sweep --sites 3 --betas 0.1,1 --deltas 0.5,1.5 --tmax 0.01 --steps 2 --jobs " + s + " --out-dir " +
       p("sweep" + s));
  }
  compare("e1.csv", "e2.csv");
  compare("eof1.csv", "eof2.csv");
  compare("m1.csv", "m2.csv");
  compare("d1.csv", "d2.csv");
  compare("sweep1/summary.csv", "sweep2/summary.csv");
  compare("sweep1/beta_0.1_delta_1.5_swap_0-2.csv", "sweep2/beta_0.1_delta_1.5_swap_0-2.csv");
  fs::remove_all(dir);
  return {failures == 0, std::to_string(pairs) + " repeated CLI outputs compared, " + std::to_string(failures) +
                             " differ or are missing"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string tool = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "PPT oracle equivalence", 30.0, ppt_oracle_equivalence},
      {2, "singlet benchmarks", 0.0, singlet_benchmarks},
      {3, "separability zeroing", 120.0, separability_zeroing},
      {4, "Kadison-Ringrose bound", 0.0, kadison_ringrose},
      {5, "inequality suite", 0.0, inequality_suite},
      {6, "XXZ entanglement production", 300.0, xxz_production},
      {7, "dynamics structural suite", 0.0, dynamics_structure},
      {8, "CLI determinism", 0.0, [&] { return determinism(tool); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass;
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      pass = false;
      o.detail += "; over the " + num(c.budget_s) + " s budget";
    }
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << num(secs) << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
