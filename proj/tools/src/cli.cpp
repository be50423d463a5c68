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

#include "qcorr/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/bipartite.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/qmat_io.hpp"
#include "qcorr/xxz.hpp"

namespace qcorr::cli {
namespace {

namespace fs = std::filesystem;

struct ChainFlags {
  int sites = 5;
  double beta = 1.0;
  double delta = 0.5;
  std::optional<std::string> swap;
  std::optional<int> cut;
};

struct SearchFlags {
  std::optional<std::uint64_t> seed;
  int restarts = 64;
  int threads = 1;
  int iteration_cap = 2000;
  std::optional<Index> max_ensemble;
};

struct GibbsFlags {
  ChainFlags chain;
  std::string out;
};

struct MeasureFlags {
  std::string state;
  std::string measure;
  std::string entropy = "von-neumann";
  std::string observable;
  bool profile = false;
  std::string a;
  std::string a2;
  std::string warm_start;
  std::string out;
  SearchFlags search;
};

struct EvolveFlags {
  ChainFlags chain;
  std::string initial;
  std::string initial_state;
  double tmax = 0.1;
  int steps = 100;
  std::string mode = "exact";
  bool raw = false;
  std::vector<std::size_t> eof_samples;
  std::string out;
  SearchFlags search;
};

struct SweepFlags {
  ChainFlags chain;
  std::vector<double> betas;
  std::vector<double> deltas;
  std::vector<std::string> swaps;
  std::string initial;
  double tmax = 0.1;
  int steps = 100;
  std::string mode = "exact";
  bool raw = false;
  int jobs = 1;
  std::string out_dir;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::BadConfig, what); }

std::pair<int, int> parse_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) invalid("swap pair must look like k:l, got '" + text + "'");
  int k = 0, l = 0;
  const char* first = text.data();
  const char* mid = first + colon;
  const char* last = first + text.size();
  const auto r1 = std::from_chars(first, mid, k);
  const auto r2 = std::from_chars(mid + 1, last, l);
  if (r1.ec != std::errc{} || r1.ptr != mid || r2.ec != std::errc{} || r2.ptr != last) {
    invalid("swap pair must look like k:l, got '" + text + "'");
  }
  return {k, l};
}

ChainConfig to_chain(const ChainFlags& f) {
  ChainConfig cfg;
  cfg.sites = f.sites;
  cfg.beta = f.beta;
  cfg.delta = f.delta;
  // (1, 3) needs four sites; shorter chains default to exchanging the ends.
  cfg.swap_pair = f.swap ? parse_pair(*f.swap) : (f.sites >= 4 ? std::pair{1, 3} : std::pair{0, f.sites - 1});
  cfg.cut = f.cut;
  cfg.validate();
  return cfg;
}

void add_chain_options(CLI::App* app, ChainFlags& f) {
  app->add_option("--sites", f.sites, "Number of chain sites (2..6)")->capture_default_str();
  app->add_option("--beta", f.beta, "Inverse temperature")->capture_default_str();
  app->add_option("--delta", f.delta, "Anisotropy")->capture_default_str();
  app->add_option("--swap", f.swap, "Exchanged sites k:l (default 1:3, or 0:sites-1 below 4 sites)");
  app->add_option("--cut", f.cut, "Sites [0, cut) form the first subsystem (default ceil(sites/2))");
}

void add_search_options(CLI::App* app, SearchFlags& f) {
  app->add_option("--seed", f.seed, "Seed of the ensemble search (required when searching)");
  app->add_option("--restarts", f.restarts, "Optimizer restarts")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--threads", f.threads, "Concurrent restarts")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--iteration-cap", f.iteration_cap, "Refinement sweeps per restart")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--max-ensemble", f.max_ensemble, "Largest ensemble size (default rank^2)");
}

OptimizerSettings to_settings(const SearchFlags& f, std::string_view purpose) {
  if (!f.seed) invalid(std::string(purpose) + " is randomized; pass --seed");
  OptimizerSettings s;
  s.seed = *f.seed;
  s.restarts = f.restarts;
  s.threads = f.threads;
  s.iteration_cap = f.iteration_cap;
  s.max_ensemble_size = f.max_ensemble;
  return s;
}

EvolutionMode to_mode(const std::string& text) {
  if (text == "exact") return EvolutionMode::ExactSemigroup;
  if (text == "euler") return EvolutionMode::EulerFirstOrder;
  invalid("mode must be exact or euler");
}

std::string fmt(double v) { return format_double(v); }

std::string alternating_bits(int sites) {
  std::string bits;
  for (int i = 0; i < sites; ++i) bits.push_back(i % 2 ? '1' : '0');
  return bits;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + tmp.string());
    f << text;
    if (!f.flush()) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

// Observable syntax: "pauli:XZ", "proj:i" (projector on basis vector i), or a QMAT path.
HermitianOperator parse_observable(const std::string& text, Index dim) {
  ComplexMatrix m;
  if (text.rfind("pauli:", 0) == 0) {
    m = pauli_word(text.substr(6));
  } else if (text.rfind("proj:", 0) == 0) {
    const std::string idx = text.substr(5);
    Index i = -1;
    const auto r = std::from_chars(idx.data(), idx.data() + idx.size(), i);
    if (r.ec != std::errc{} || r.ptr != idx.data() + idx.size() || i < 0 || i >= dim) {
      invalid("bad projector index in '" + text + "'");
    }
    m = ComplexMatrix::Zero(dim, dim);
    m(i, i) = 1.0;
  } else if (!text.empty()) {
    m = read_qmat_file(text).matrix;
  } else {
    invalid("missing observable");
  }
  if (m.rows() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "observable '" + text + "' has dimension " +
                                                  std::to_string(m.rows()) + ", expected " +
                                                  std::to_string(dim));
  }
  return HermitianOperator(m);
}

// Product of the spectral ensembles of the two reductions; only for product states.
PureEnsemble product_warm_start(const DensityMatrix& rho) {
  const BipartiteDims dims = rho.bipartite();
  const DensityMatrix r1 = partial_trace(rho, Subsystem::First);
  const DensityMatrix r2 = partial_trace(rho, Subsystem::Second);
  if (trace_norm(rho.matrix() - kron(r1.matrix(), r2.matrix())) > 1e-8) {
    invalid("--warm-start product needs a product state");
  }
  const SpectralDecomposition e1 = hermitian_eig(r1.op()), e2 = hermitian_eig(r2.op());
  std::vector<double> w;
  std::vector<ComplexVector> comps;
  for (Index i = 0; i < dims.d1; ++i) {
    for (Index j = 0; j < dims.d2; ++j) {
      const double p = std::max(0.0, e1.eigenvalues[i]) * std::max(0.0, e2.eigenvalues[j]);
      if (p <= 1e-15) continue;
      w.push_back(p);
      comps.push_back(kron(e1.eigenvectors.col(i), e2.eigenvectors.col(j)));
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return PureEnsemble(std::move(w), std::move(comps), dims);
}

// Computational-basis ensemble; only for diagonal states.
PureEnsemble diagonal_warm_start(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix off = m;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-12) invalid("--warm-start diagonal needs a diagonal state");
  std::vector<double> w;
  std::vector<ComplexVector> comps;
  for (Index i = 0; i < m.rows(); ++i) {
    if (m(i, i).real() <= 1e-15) continue;
    w.push_back(m(i, i).real());
    ComplexVector e = ComplexVector::Zero(m.rows());
    e[i] = 1.0;
    comps.push_back(std::move(e));
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return PureEnsemble(std::move(w), std::move(comps), rho.dims());
}

void apply_warm_start(const std::string& kind, const DensityMatrix& rho, OptimizerSettings& s) {
  if (kind.empty()) return;
  if (kind == "product") {
    s.warm_start = product_warm_start(rho);
  } else if (kind == "diagonal") {
    s.warm_start = diagonal_warm_start(rho);
  } else {
    invalid("--warm-start must be product or diagonal");
  }
}

std::string machine_line(const std::string& measure, const std::string& value, bool converged) {
  return measure + "," + value + "," + (converged ? "true" : "false");
}

int cmd_gibbs(const GibbsFlags& f, std::ostream& out) {
  const ChainConfig cfg = to_chain(f.chain);
  const DensityMatrix rho = gibbs_state(xxz_hamiltonian(cfg), cfg.beta, cfg.dims());
  write_density_matrix(f.out, rho);
  out << "gibbs: sites=" << cfg.sites << " beta=" << fmt(cfg.beta) << " delta=" << fmt(cfg.delta)
      << " dims=" << cfg.dims().d1 << "x" << cfg.dims().d2 << "\n";
  out << "wrote " << f.out << "\n";
  return kOk;
}

int cmd_measure(const MeasureFlags& f, std::ostream& out) {
  const DensityMatrix rho = read_density_matrix(f.state);
  std::string value;
  bool converged = true;
  std::ostringstream report;
  report << "state: " << f.state << " (dim " << rho.dim();
  if (rho.dims()) report << ", dims " << rho.dims()->d1 << "x" << rho.dims()->d2;
  report << ")\n";

  if (f.measure == "ma") {
    const double v = m_a(rho);
    report << "M^a (linear entropy of the second reduction): " << fmt(v) << "\n";
    value = fmt(v);
  } else if (f.measure == "ppt") {
    const PptVerdict direct = ppt_direct(rho);
    const PptVerdict mapped = cp_cocp_verdict(entanglement_mapping(rho));
    report << "partial transpose minimum eigenvalue: " << fmt(direct.min_pt_eigenvalue) << "\n";
    report << "entanglement map: cp minimum " << fmt(mapped.choi_cp_min) << ", co-cp minimum "
           << fmt(mapped.choi_cocp_min) << "\n";
    report << "criteria agree: " << (direct.is_ppt == mapped.is_ppt ? "yes" : "NO") << "\n";
    value = direct.is_ppt ? "true" : "false";
  } else if (f.measure == "eof") {
    EntropyFunctional ef;
    if (f.entropy == "linear") {
      ef = EntropyFunctional::linear();
    } else if (f.entropy == "von-neumann") {
      ef = EntropyFunctional::von_neumann();
    } else {
      invalid("--entropy must be linear or von-neumann");
    }
    OptimizerSettings s = to_settings(f.search, "eof");
    apply_warm_start(f.warm_start, rho, s);
    const EofResult r = eof(rho, ef, s);
    report << "entanglement of formation (" << f.entropy << ", upper bound): " << fmt(r.value) << "\n";
    report << "ensemble size: " << r.best_ensemble.size() << ", restarts: " << r.restarts_used << "\n";
    value = fmt(r.value);
    converged = r.converged;
  } else if (f.measure == "dqc") {
    OptimizerSettings s = to_settings(f.search, "dqc");
    apply_warm_start(f.warm_start, rho, s);
    if (f.profile == !f.observable.empty()) invalid("dqc needs exactly one of --observable, --profile");
    if (f.profile) {
      const auto family = pauli_product_family(rho.bipartite());
      const CorrelationProfile p = quantum_correlation_profile(rho, family, s);
      converged = true;
      for (const auto& r : p.results) converged = converged && r.converged;
      report << "profile over " << family.size() << " product observables, score " << fmt(p.score) << "\n";
      value = fmt(p.score);
    } else {
      (void)rho.bipartite();
      const HermitianOperator a = parse_observable(f.observable, rho.dim());
      const DqcResult r = quantum_correlation_distance(rho, a, s);
      report << "d(rho, A) upper bound: " << fmt(r.value) << " (normalized " << fmt(r.normalized_value)
             << ", |A| = " << fmt(r.observable_norm) << ")\n";
      report << "restarts: " << r.restarts_used << "\n";
      value = fmt(r.value);
      converged = r.converged;
    }
  } else if (f.measure == "cq") {
    const BipartiteDims dims = rho.bipartite();
    const HermitianOperator a = parse_observable(f.a, dims.d1);
    const HermitianOperator a2 = parse_observable(f.a2, dims.d2);
    const CorrelationReport r = quantum_correlation_coefficient(rho, a, a2);
    report << "C_q (signed): " << fmt(r.value) << ", covariance " << fmt(r.numerator) << "\n";
    value = fmt(r.value);
  } else {
    invalid("unknown measure '" + f.measure + "'");
  }

  const std::string line = machine_line(f.measure, value, converged);
  out << "measure: " << f.measure << "\n" << report.str() << line << "\n";
  if (!f.out.empty()) write_text_atomic(f.out, "measure,value,converged\n" + line + "\n");
  return kOk;
}

ProductionSchedule make_schedule(double tmax, int steps, const std::string& mode, bool raw) {
  ProductionSchedule sched;
  sched.evolve.tmax = tmax;
  sched.evolve.steps = steps;
  sched.evolve.mode = to_mode(mode);
  sched.evolve.renormalize = !raw;
  return sched;
}

int cmd_evolve(const EvolveFlags& f, std::ostream& out) {
  const ChainConfig cfg = to_chain(f.chain);
  ProductionSchedule sched = make_schedule(f.tmax, f.steps, f.mode, f.raw);
  if (!f.eof_samples.empty()) {
    sched.eof_samples = f.eof_samples;
    sched.eof_settings = to_settings(f.search, "--eof-samples");
  }
  DensityMatrix sigma0 = DensityMatrix::maximally_mixed(2);
  std::string label;
  if (!f.initial_state.empty()) {
    if (!f.initial.empty()) invalid("pass only one of --initial, --initial-state");
    sigma0 = read_density_matrix(f.initial_state);
    if (sigma0.dim() != cfg.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "initial state dimension differs from the chain");
    }
    label = f.initial_state;
  } else {
    label = f.initial.empty() ? alternating_bits(cfg.sites) : f.initial;
    sigma0 = chain_basis_state(cfg, label);
  }
  const ProductionExperiment ex = production_experiment(cfg, sigma0, sched);
  write_production_csv(f.out, ex.series);

  const ProductionSummary& s = ex.summary;
  out << "evolve: sites=" << s.sites << " beta=" << fmt(s.beta) << " delta=" << fmt(s.delta) << " swap="
      << s.swap_pair.first << ":" << s.swap_pair.second << " cut=" << s.cut << " initial=" << label
      << " mode=" << to_string(ex.series.mode) << "\n";
  out << "max trace drift per step: " << fmt(s.max_trace_drift) << "\n";
  for (const EofSample& e : ex.eof) {
    out << "eof,t=" << fmt(e.time) << ",M=" << fmt(e.eof_linear) << ",E=" << fmt(e.production)
        << ",E_a=" << fmt(e.ea) << ",bound=" << (e.bound_holds ? "holds" : "VIOLATED") << "\n";
  }
  out << "summary,first_time=" << fmt(s.first_time) << ",ea_over_t=" << fmt(s.ea_over_t)
      << ",sign=" << s.sign << "\n";
  out << "wrote " << f.out << "\n";
  return kOk;
}

std::string job_name(const ChainConfig& c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "beta_%.6g_delta_%.6g_swap_%d-%d.csv", c.beta, c.delta, c.swap_pair.first,
                c.swap_pair.second);
  return buf;
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  const ChainConfig base = to_chain(f.chain);
  SweepGrid grid;
  grid.betas = f.betas.empty() ? std::vector<double>{base.beta} : f.betas;
  grid.deltas = f.deltas.empty() ? std::vector<double>{base.delta} : f.deltas;
  if (f.swaps.empty()) {
    grid.swap_pairs = {base.swap_pair};
  } else {
    for (const auto& s : f.swaps) grid.swap_pairs.push_back(parse_pair(s));
  }
  const ProductionSchedule sched = make_schedule(f.tmax, f.steps, f.mode, f.raw);
  const std::string bits = f.initial.empty() ? alternating_bits(base.sites) : f.initial;
  const std::vector<SweepJob> jobs = run_sweep(base, grid, bits, sched, f.jobs);

  const fs::path dir(f.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());

  std::string summary = "file,beta,delta,k,l,cut,first_time,ea_over_t,sign,ea_final,max_trace_drift\n";
  for (const SweepJob& job : jobs) {
    const std::string name = job_name(job.cfg);
    write_production_csv(dir / name, job.result.series);
    const ProductionSummary& s = job.result.summary;
    summary += name + "," + fmt(s.beta) + "," + fmt(s.delta) + "," + std::to_string(s.swap_pair.first) + "," +
               std::to_string(s.swap_pair.second) + "," + std::to_string(s.cut) + "," + fmt(s.first_time) +
               "," + fmt(s.ea_over_t) + "," + std::to_string(s.sign) + "," +
               fmt(job.result.series.ea_values.back()) + "," + fmt(s.max_trace_drift) + "\n";
  }
  write_text_atomic(dir / "summary.csv", summary);
  out << "sweep: " << jobs.size() << " jobs, initial=" << bits << "\n";
  out << "wrote " << (dir / "summary.csv").string() << "\n";
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return kIoFailure;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::LengthMismatch:
      return kDimensionMismatch;
    default:
      return kInvalidInput;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcorr: correlation and entanglement measures, XXZ entanglement production", "qcorr"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file; [gibbs], [measure], [evolve], [sweep] sections");

  GibbsFlags gibbs_flags;
  CLI::App* gibbs = app.add_subcommand("gibbs", "Write the Gibbs state of the XXZ chain");
  add_chain_options(gibbs, gibbs_flags.chain);
  gibbs->add_option("--out", gibbs_flags.out, "QMAT output path")->required();

  MeasureFlags mf;
  CLI::App* measure = app.add_subcommand("measure", "Evaluate a measure on a stored state");
  measure->add_option("--state", mf.state, "QMAT input path")->required();
  measure->add_option("--measure", mf.measure, "eof, ma, ppt, dqc or cq")
      ->required()
      ->check(CLI::IsMember({"eof", "ma", "ppt", "dqc", "cq"}));
  measure->add_option("--entropy", mf.entropy, "eof functional: von-neumann or linear")->capture_default_str();
  measure->add_option("--observable", mf.observable, "dqc observable: pauli:WORD, proj:i or QMAT path");
  measure->add_flag("--profile", mf.profile, "dqc over all local Pauli/Gell-Mann products");
  measure->add_option("--a", mf.a, "cq observable on the first factor");
  measure->add_option("--a2", mf.a2, "cq observable on the second factor");
  measure->add_option("--warm-start", mf.warm_start, "product or diagonal");
  measure->add_option("--out", mf.out, "CSV output (measure,value,converged)");
  add_search_options(measure, mf.search);

  EvolveFlags ef;
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Entanglement production along the jump semigroup");
  add_chain_options(evolve_cmd, ef.chain);
  evolve_cmd->add_option("--initial", ef.initial, "Basis state bits, site 0 first (default 0101...)");
  evolve_cmd->add_option("--initial-state", ef.initial_state, "QMAT initial state instead of --initial");
  evolve_cmd->add_option("--tmax", ef.tmax, "Final time")->capture_default_str();
  evolve_cmd->add_option("--steps", ef.steps, "Number of steps")->capture_default_str();
  evolve_cmd->add_option("--mode", ef.mode, "exact or euler")->capture_default_str();
  evolve_cmd->add_flag("--raw", ef.raw, "Do not renormalize the trace");
  evolve_cmd->add_option("--eof-samples", ef.eof_samples, "Series indices for the EoF-based production")
      ->delimiter(',');
  evolve_cmd->add_option("--out", ef.out, "CSV output path")->required();
  add_search_options(evolve_cmd, ef.search);

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "Production experiments over a parameter grid");
  add_chain_options(sweep, sf.chain);
  sweep->add_option("--betas", sf.betas, "Comma-separated beta values")->delimiter(',');
  sweep->add_option("--deltas", sf.deltas, "Comma-separated delta values")->delimiter(',');
  sweep->add_option("--swaps", sf.swaps, "Comma-separated k:l pairs")->delimiter(',');
  sweep->add_option("--initial", sf.initial, "Basis state bits (default 0101...)");
  sweep->add_option("--tmax", sf.tmax, "Final time")->capture_default_str();
  sweep->add_option("--steps", sf.steps, "Number of steps")->capture_default_str();
  sweep->add_option("--mode", sf.mode, "exact or euler")->capture_default_str();
  sweep->add_flag("--raw", sf.raw, "Do not renormalize the trace");
  sweep->add_option("--jobs", sf.jobs, "Concurrent jobs")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", sf.out_dir, "Directory for per-job CSV files and summary.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::FileError& e) {
    err << "qcorr: " << e.what() << "\n";
    return kIoFailure;
  } catch (const CLI::ParseError& e) {
    err << "qcorr: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*gibbs) return cmd_gibbs(gibbs_flags, out);
    if (*measure) return cmd_measure(mf, out);
    if (*evolve_cmd) return cmd_evolve(ef, out);
    if (*sweep) return cmd_sweep(sf, out);
  } catch (const Error& e) {
    err << "qcorr: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "qcorr: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "qcorr: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace qcorr::cli
