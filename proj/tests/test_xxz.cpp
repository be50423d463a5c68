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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcorr/entanglement.hpp"
#include "qcorr/xxz.hpp"
#include "test_support.hpp"

using namespace qcorr;
using namespace qcorr::testing;

namespace {

ChainConfig chain(int sites, double beta, double delta, std::pair<int, int> pair) {
  ChainConfig c;
  c.sites = sites;
  c.beta = beta;
  c.delta = delta;
  c.swap_pair = pair;
  return c;
}

// Permutation matrix built bit by bit: |b_0 ... b_k ... b_l ...> -> |... b_l ... b_k ...>.
ComplexMatrix swap_oracle(int sites, int k, int l) {
  const Index d = Index{1} << sites;
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (Index x = 0; x < d; ++x) {
    std::vector<int> bits(sites);
    for (int s = 0; s < sites; ++s) bits[s] = (x >> (sites - 1 - s)) & 1;
    std::swap(bits[k], bits[l]);
    Index y = 0;
    for (int s = 0; s < sites; ++s) y = (y << 1) | bits[s];
    p(y, x) = 1.0;
  }
  return p;
}

ComplexMatrix total_sz(int sites) {
  ComplexMatrix out = ComplexMatrix::Zero(Index{1} << sites, Index{1} << sites);
  for (int s = 0; s < sites; ++s) {
    std::string word(sites, 'I');
    word[s] = 'Z';
    out += pauli_word(word);
  }
  return out;
}

ComplexMatrix random_psd(Index d, Rng& rng) {
  const ComplexMatrix g = random_ginibre(d, d, rng);
  return g * g.adjoint();
}

}  // namespace

TEST_SUITE("xxz") {

TEST_CASE("config validation") {
  CHECK_NOTHROW(ChainConfig{}.validate());
  CHECK(ChainConfig{}.effective_cut() == 3);
  auto code_of = [](const ChainConfig& c) {
    try {
      c.validate();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of(chain(7, 1, 0.5, {1, 3})) == ErrorCode::DimensionCap);
  CHECK(code_of(chain(5, 1, 0.5, {3, 3})) == ErrorCode::BadPair);
  CHECK(code_of(chain(5, 1, 0.5, {1, 5})) == ErrorCode::BadPair);
  CHECK(code_of(chain(1, 1, 0.5, {0, 0})) == ErrorCode::BadConfig);
  CHECK(code_of(chain(3, -1, 0.5, {0, 2})) == ErrorCode::BadConfig);
  ChainConfig bad_cut = chain(4, 1, 0.5, {0, 1});
  bad_cut.cut = 4;
  CHECK(code_of(bad_cut) == ErrorCode::BadConfig);
}

TEST_CASE("hamiltonian spectra and symmetries") {
  const RealVector ev = hermitian_eig(xxz_hamiltonian(chain(2, 1, 0.5, {0, 1}))).eigenvalues;
  CHECK(ev[0] == doctest::Approx(-1.5));
  CHECK(ev[1] == doctest::Approx(-0.5));
  CHECK(ev[2] == doctest::Approx(-0.5));
  CHECK(ev[3] == doctest::Approx(2.5));
  for (double delta : {-1.0, 0.0, 0.3, 2.0}) {
    CHECK(std::abs(xxz_hamiltonian(chain(2, 1, delta, {0, 1})).matrix().trace()) < 1e-14);
    const ComplexMatrix h = xxz_hamiltonian(chain(3, 1, delta, {0, 2})).matrix();
    const ComplexMatrix sz = total_sz(3);
    CHECK((h * sz - sz * h).norm() < 1e-12);
  }
  // Bond-by-bond construction against explicit Kronecker products at 3 sites.
  const ComplexMatrix h3 = xxz_hamiltonian(chain(3, 1, 0.7, {0, 1})).matrix();
  ComplexMatrix oracle = ComplexMatrix::Zero(8, 8);
  for (const char* bond : {"XXI", "YYI", "IXX", "IYY"}) oracle -= pauli_word(bond);
  oracle -= 0.7 * (pauli_word("ZZI") + pauli_word("IZZ"));
  CHECK(max_abs(h3 - oracle) < 1e-14);
}

TEST_CASE("gibbs state examples") {
  const HermitianOperator h = xxz_hamiltonian(chain(3, 0, 0.5, {0, 2}));
  CHECK(max_abs(gibbs_state(h, 0.0).matrix() - ComplexMatrix::Identity(8, 8) / 8.0) < 1e-15);

  const HermitianOperator h2 = xxz_hamiltonian(chain(2, 50, 0.5, {0, 1}));
  const SpectralDecomposition sd = hermitian_eig(h2);
  const ComplexVector g = sd.eigenvectors.col(0);
  CHECK(max_abs(gibbs_state(h2, 50.0).matrix() - g * g.adjoint()) < 1e-8);

  for (int sites : {2, 3, 4}) {
    const HermitianOperator hs = xxz_hamiltonian(chain(sites, 1, 0.5, {0, 1}));
    double last = std::numeric_limits<double>::infinity();
    for (double beta : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      const DensityMatrix rho = gibbs_state(hs, beta);
      CHECK((rho.matrix() * hs.matrix() - hs.matrix() * rho.matrix()).norm() < 1e-10);
      const double s = entropy(rho, EntropyFunctional::von_neumann());
      CHECK(s <= last + 1e-12);
      last = s;
    }
  }
}

TEST_CASE("swap superoperator") {
  const ChainConfig c2 = chain(2, 1, 0.5, {0, 1});
  const SuperOperator psi2 = swap_superop(c2);
  CHECK(psi2.kind() == SuperOperator::Kind::PsiSwap);
  CHECK(max_abs(psi2.apply(ComplexMatrix::Identity(4, 4)) - ComplexMatrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(psi2.apply(pauli_word("ZI")) - pauli_word("IZ")) == 0.0);

  Rng rng(40);
  const ChainConfig c3 = chain(3, 1, 0.5, {0, 2});
  const SuperOperator psi3 = swap_superop(c3);
  const ComplexMatrix s = swap_oracle(3, 0, 2);
  CHECK(max_abs(swap_unitary(3, 0, 2) - s) == 0.0);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix x = random_ginibre(8, 8, rng), y = random_ginibre(8, 8, rng);
    CHECK(max_abs(psi3.apply(x) - s * x * s) < 1e-14);
    CHECK(max_abs(psi3.apply(psi3.apply(x)) - x) == 0.0);
    CHECK(max_abs(psi3.apply(x * y) - psi3.apply(x) * psi3.apply(y)) < 1e-10);
  }
  CHECK(max_abs(swap_unitary(5, 1, 3) - swap_oracle(5, 1, 3)) == 0.0);
}

TEST_CASE("tau superoperator") {
  const SuperOperator tau2 = tau_superop(chain(2, 1, 0.5, {0, 1}));
  CHECK(max_abs(tau2.apply(ComplexMatrix::Identity(4, 4)) - ComplexMatrix::Identity(4, 4)) < 1e-12);
  CHECK(max_abs(tau2.apply(pauli_word("ZI")) - 0.5 * (pauli_word("ZI") + pauli_word("IZ"))) < 1e-15);
  CHECK(max_abs(tau2.apply(pauli_word("XX")) - pauli_word("XX")) < 1e-15);

  Rng rng(41);
  const SuperOperator tau = tau_superop(chain(4, 1, 0.5, {1, 3}));
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix x = random_ginibre(16, 16, rng);
    CHECK(max_abs(tau.apply(tau.apply(x)) - tau.apply(x)) < 1e-12);
    const ComplexMatrix p = random_psd(16, rng);
    CHECK(hermitian_eig(HermitianOperator(tau.apply(p))).eigenvalues[0] >= -1e-12);
  }
}

TEST_CASE("gamma operator") {
  const ChainConfig c0 = chain(3, 0.0, 0.5, {0, 2});
  const DensityMatrix rho0 = gibbs_state(xxz_hamiltonian(c0), 0.0);
  CHECK(max_abs(gamma_operator(rho0, tau_superop(c0)) - ComplexMatrix::Identity(8, 8) / 8.0) < 1e-14);

  const ChainConfig c2 = chain(2, 1.0, 0.5, {0, 1});
  const DensityMatrix rho2 = gibbs_state(xxz_hamiltonian(c2), 1.0);
  CHECK(max_abs(gamma_operator(rho2, tau_superop(c2)) - rho2.matrix()) < 1e-12);

  // Independent recomputation via eigendecompositions.
  const ChainConfig c3 = chain(3, 1.0, 0.5, {0, 2});
  const DensityMatrix rho3 = gibbs_state(xxz_hamiltonian(c3), 1.0);
  const ComplexMatrix tr = tau_superop(c3).apply(rho3.matrix());
  auto sqrt_of = [](const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return ComplexMatrix(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
  };
  const ComplexMatrix gamma = gamma_operator(rho3, tau_superop(c3));
  CHECK(max_abs(gamma - sqrt_of(rho3.matrix()) * sqrt_of(tr)) < 1e-12);
  CHECK(max_abs(psd_sqrt(tr) * psd_sqrt(tr) - tr) < 1e-12);
}

TEST_CASE("jump maps: duality, positivity, generators") {
  Rng rng(42);
  for (const ChainConfig& c : {chain(2, 1.0, 0.5, {0, 1}), chain(3, 1.0, 0.5, {0, 2}),
                               chain(3, 0.3, 1.5, {0, 1}), chain(4, 2.0, -0.5, {1, 3})}) {
    const JumpMaps maps = jump_maps(c);
    const Index d = c.dim();
    // Full matrix-unit basis.
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        ComplexMatrix eij = ComplexMatrix::Zero(d, d);
        eij(i, j) = 1.0;
        for (Index k = 0; k < d; k += std::max<Index>(1, d / 4)) {
          for (Index l = 0; l < d; l += std::max<Index>(1, d / 4)) {
            ComplexMatrix ekl = ComplexMatrix::Zero(d, d);
            ekl(k, l) = 1.0;
            const Complex lhs = (maps.ed.apply(eij) * ekl).trace();
            const Complex rhs = (eij * maps.e.apply(ekl)).trace();
            CHECK(std::abs(lhs - rhs) < 1e-10);
          }
        }
      }
    }
    for (int rep = 0; rep < 5; ++rep) {
      const ComplexMatrix sigma = random_psd(d, rng);
      CHECK(hermitian_eig(HermitianOperator(maps.ed.apply(sigma))).eigenvalues[0] >= -1e-12);
      const ComplexMatrix a = random_ginibre(d, d, rng);
      CHECK(max_abs(maps.l.apply(a) - (maps.e.apply(a) - a)) < 1e-13);
      CHECK(max_abs(maps.ld.apply(a) - (maps.ed.apply(a) - a)) < 1e-13);
    }
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    const SuperOperator tau = tau_superop(c);
    CHECK(max_abs(maps.l.apply(eye) - (tau.apply(maps.gamma.adjoint() * maps.gamma) - eye)) < 1e-13);
  }

  // Swap-symmetric case: gamma = rho and E(A) = tau(rho A rho).
  const ChainConfig c2 = chain(2, 1.0, 0.5, {0, 1});
  const JumpMaps m2 = jump_maps(c2);
  const DensityMatrix rho = gibbs_state(xxz_hamiltonian(c2), 1.0);
  const ComplexMatrix a = random_ginibre(4, 4, rng);
  CHECK(max_abs(m2.e.apply(a) - tau_superop(c2).apply(rho.matrix() * a * rho.matrix())) < 1e-13);

  // Infinite temperature: gamma = I/dim, so L(1) = (1/dim^2 - 1) 1.
  const ChainConfig hot = chain(3, 0.0, 0.5, {0, 2});
  const JumpMaps mh = jump_maps(hot);
  CHECK(max_abs(mh.l.apply(ComplexMatrix::Identity(8, 8)) - (1.0 / 64.0 - 1.0) * ComplexMatrix::Identity(8, 8)) <
        1e-14);
}

TEST_CASE("vectorization convention") {
  Rng rng(43);
  const ComplexMatrix x = random_ginibre(4, 4, rng), a = random_ginibre(4, 4, rng), y = random_ginibre(4, 4, rng);
  CHECK(max_abs(unvectorize(vectorize(a), 4) - a) == 0.0);
  CHECK(vectorize(a)[1 * 4 + 2] == a(1, 2));
  const ComplexVector lhs = vectorize(x * a * y);
  const ComplexVector rhs = kron(x, y.transpose()) * vectorize(a);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("exponential and semigroup property") {
  Rng rng(44);
  const ChainConfig c = chain(3, 1.0, 0.5, {0, 2});
  const JumpMaps maps = jump_maps(c);
  const ComplexVector v = vectorize(chain_basis_state(c, "010").matrix());
  const ComplexVector a = apply_exponential(maps.ld.action(), apply_exponential(maps.ld.action(), v, 0.03), 0.05);
  const ComplexVector b = apply_exponential(maps.ld.action(), v, 0.08);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);

  // Against a dense eigen-free reference: small-matrix Taylor with many terms.
  const ComplexMatrix g = random_ginibre(5, 5, rng) * 0.3;
  const ComplexVector w = random_unit_vector(5, rng);
  ComplexVector term = w, sum = w;
  for (int k = 1; k < 60; ++k) {
    term = g * term * (1.5 / k);
    sum += term;
  }
  CHECK((apply_exponential(g, w, 1.5) - sum).norm() < 1e-12);
  CHECK((apply_exponential(g, w, 0.0) - w).norm() == 0.0);

  // Unnormalized series steps compose.
  EvolveOptions opts;
  opts.tmax = 0.08;
  opts.steps = 2;
  opts.renormalize = false;
  opts.keep_states = true;
  const ProductionSeries s = evolve(c, maps, chain_basis_state(c, "010"), opts);
  CHECK((vectorize(s.states[2]) - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("euler and exact modes agree at small steps") {
  const ChainConfig c = chain(2, 1.0, 0.5, {0, 1});
  const DensityMatrix s0 = chain_basis_state(c, "01");
  EvolveOptions exact;
  exact.tmax = 0.1;
  exact.steps = 1000;
  EvolveOptions euler = exact;
  euler.mode = EvolutionMode::EulerFirstOrder;
  const auto a = evolve(c, s0, exact), b = evolve(c, s0, euler);
  REQUIRE(a.times.size() == 1001);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) worst = std::max(worst, std::abs(a.ea_values[i] - b.ea_values[i]));
  CHECK(worst < 1e-3);
  CHECK(b.mode == EvolutionMode::EulerFirstOrder);
  CHECK(to_string(EvolutionMode::EulerFirstOrder) == "euler-first-order");
}

TEST_CASE("series invariants and errors") {
  const ChainConfig c = chain(3, 1.0, 0.5, {0, 2});
  EvolveOptions opts;
  opts.tmax = 0.05;
  opts.steps = 5;
  const auto s = evolve(c, chain_basis_state(c, "010"), opts);
  CHECK(s.times[0] == 0.0);
  CHECK(s.ea_values[0] == 0.0);
  CHECK(s.trace_drift.size() == s.times.size());
  for (std::size_t i = 1; i < s.times.size(); ++i) CHECK(s.times[i] > s.times[i - 1]);

  EvolveOptions big = opts;
  big.mode = EvolutionMode::EulerFirstOrder;
  big.tmax = 2.0;
  big.steps = 2;
  try {
    (void)evolve(c, chain_basis_state(c, "010"), big);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooLarge);
  }
  CHECK_THROWS_AS(chain_basis_state(c, "01"), Error);
  CHECK_THROWS_AS(chain_basis_state(c, "012"), Error);
  CHECK_THROWS_AS(evolve(c, DensityMatrix::maximally_mixed(4), opts), Error);

  // One tiny euler step changes M^a by O(h).
  EvolveOptions tiny;
  tiny.tmax = 1e-6;
  tiny.steps = 1;
  tiny.mode = EvolutionMode::EulerFirstOrder;
  const auto t = evolve(c, chain_basis_state(c, "010"), tiny);
  CHECK(std::abs(t.ea_values[1]) < 1e-4);
}

TEST_CASE("production on the default chain") {
  ChainConfig c;  // 5 sites, beta 1, delta 0.5, swap (1, 3)
  ProductionSchedule sched;
  sched.evolve.tmax = 0.01;
  sched.evolve.steps = 10;
  const auto alt = production_experiment(c, chain_basis_state(c, "01010"), sched);
  CHECK(alt.summary.first_time == doctest::Approx(1e-3));
  CHECK(alt.summary.sign == 1);
  CHECK(alt.summary.ea_over_t > 0.0);
  CHECK(alt.summary.cut == 3);
  CHECK(alt.series.ea_values.back() > 1e-6);

  // |00000> sits in a one-dimensional magnetization sector: nothing is produced.
  const auto flat = production_experiment(c, chain_basis_state(c, "00000"), sched);
  for (double ea : flat.series.ea_values) CHECK(std::abs(ea) < 1e-12);

  ChainConfig iso = c;
  iso.delta = 1.0;
  const auto s = production_experiment(iso, chain_basis_state(iso, "01010"), sched);
  for (double v : s.series.ea_values) CHECK(std::isfinite(v));
}

TEST_CASE("EoF production bounded by E_a along a series") {
  const ChainConfig c = chain(3, 1.0, 0.5, {0, 2});
  ProductionSchedule sched;
  sched.evolve.tmax = 0.05;
  sched.evolve.steps = 5;
  sched.eof_samples = {1, 3, 5};
  sched.eof_settings.restarts = 4;
  sched.eof_settings.seed = 9;
  const auto exp = production_experiment(c, chain_basis_state(c, "010"), sched);
  REQUIRE(exp.eof.size() == 3);
  for (const auto& e : exp.eof) {
    CHECK(e.bound_holds);
    CHECK(e.production <= e.ea + 1e-6);
    CHECK(e.eof_linear <= exp.series.ma_values[e.index] + 1e-10);
  }
}

TEST_CASE("production CSV") {
  const ChainConfig c = chain(2, 1.0, 0.5, {0, 1});
  EvolveOptions opts;
  opts.tmax = 0.02;
  opts.steps = 2;
  const auto s = evolve(c, chain_basis_state(c, "01"), opts);
  const std::string csv = production_csv(s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,ea,ma,trace_drift");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 3);

  const auto dir = std::filesystem::temp_directory_path() / "qcorr_csv_test";
  std::filesystem::create_directories(dir);
  write_production_csv(dir / "series.csv", s);
  std::ifstream f(dir / "series.csv");
  const std::string back((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(back == csv);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps are ordered and thread-independent") {
  ChainConfig base = chain(3, 1.0, 0.5, {0, 2});
  SweepGrid grid{{0.1, 1.0}, {0.5, 1.5}, {{0, 2}, {0, 1}}};
  ProductionSchedule sched;
  sched.evolve.tmax = 0.01;
  sched.evolve.steps = 2;
  const auto one = run_sweep(base, grid, "010", sched, 1);
  const auto many = run_sweep(base, grid, "010", sched, 3);
  REQUIRE(one.size() == 8);
  REQUIRE(many.size() == 8);
  CHECK(one[0].cfg.beta == 0.1);
  CHECK(one[1].cfg.swap_pair == std::pair<int, int>{0, 1});
  CHECK(one[2].cfg.delta == 1.5);
  CHECK(one[4].cfg.beta == 1.0);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(production_csv(one[i].result.series) == production_csv(many[i].result.series));
  }
}

}  // TEST_SUITE
