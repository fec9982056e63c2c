// qploc: command-line front end.
//
// Exit status: 0 when every check of the command passes, 1 when a check
// fails or a computation aborts, 2 for configuration and usage errors.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "output.hpp"
#include "qploc/arithmetic.hpp"
#include "qploc/cocycle.hpp"
#include "qploc/config.hpp"
#include "qploc/errors.hpp"
#include "qploc/ids.hpp"
#include "qploc/ldt.hpp"
#include "qploc/localization.hpp"
#include "qploc/numeric.hpp"
#include "qploc/parallel.hpp"
#include "qploc/spectral.hpp"
#include "qploc/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qploc;
using qploc::cli::CsvWriter;

namespace {

struct Common {
  std::string config_path;
  std::string preset_name;
  int threads = 1;
  bool plot = false;
  std::optional<std::string> out;
  std::optional<std::string> frequency;
  std::optional<std::string> potential;
  std::optional<double> lambda;
  std::optional<double> phase;
  std::optional<int> depth;
  std::vector<std::int64_t> scales;
  std::optional<double> er;
  std::optional<double> energy_step;
  std::optional<int> phase_samples;
  std::optional<double> tolerance;
  std::optional<int> lyapunov_n;
  std::optional<std::string> sampling;
  std::optional<int> ids_n;
  std::optional<std::string> ids_bc;
  std::optional<int> box;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "INI configuration file");
  app->add_option("--preset", c.preset_name, "named configuration (see `qploc presets`)");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
  app->add_flag("--plot", c.plot, "also write gnuplot script stubs");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--freq", c.frequency, "golden | silver | cf:[a1,...] | num:<value>");
  app->add_option("--potential", c.potential, "sawtooth | blend:<c> | pwl:[(x,y),...]");
  app->add_option("--lambda", c.lambda, "coupling");
  app->add_option("--phase", c.phase, "phase x in [0, 1)");
  app->add_option("--depth", c.depth, "continued fraction depth");
  app->add_option("--q", c.scales, "scales q_k")->delimiter(',');
  app->add_option("--er", c.er, "good denominator ratio");
  app->add_option("--dE", c.energy_step, "energy step");
  app->add_option("--phases", c.phase_samples, "phase samples");
  app->add_option("--tol", c.tolerance, "eigenvalue tolerance");
  app->add_option("--lyap-n", c.lyapunov_n, "transfer matrix length");
  app->add_option("--sampling", c.sampling, "birkhoff | grid");
  app->add_option("--ids-n", c.ids_n, "box size for the IDS");
  app->add_option("--ids-bc", c.ids_bc, "periodic | dirichlet");
  app->add_option("--box", c.box, "box size for localization");
}

template <typename T, typename U>
void apply(const std::optional<T>& v, U& field) {
  if (v) field = *v;
}

ExperimentConfig resolve(const Common& c) {
  if (!c.config_path.empty() && !c.preset_name.empty()) throw ConfigError("--config and --preset are exclusive");
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = load_config(c.config_path);
  if (!c.preset_name.empty()) cfg = preset(c.preset_name);
  apply(c.out, cfg.output_dir);
  apply(c.frequency, cfg.frequency);
  apply(c.potential, cfg.potential);
  apply(c.lambda, cfg.lambda);
  apply(c.phase, cfg.phase);
  apply(c.depth, cfg.depth);
  if (!c.scales.empty()) cfg.scales = c.scales;
  apply(c.er, cfg.er);
  apply(c.energy_step, cfg.energy_step);
  apply(c.phase_samples, cfg.phase_samples);
  apply(c.tolerance, cfg.eigenvalue_tolerance);
  apply(c.lyapunov_n, cfg.lyapunov_n);
  apply(c.sampling, cfg.lyapunov_sampling);
  apply(c.ids_n, cfg.ids_n);
  apply(c.ids_bc, cfg.ids_bc);
  apply(c.box, cfg.localize_box);
  validate(cfg);
  return cfg;
}

fs::path prepare(const ExperimentConfig& cfg, int threads) {
  set_thread_count(threads);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  std::ofstream out(dir / "resolved-config.ini");
  write_config(cfg, out);
  return dir;
}

std::string fmt(double v) { return format_double(v); }

LyapunovSampling sampling_of(const ExperimentConfig& cfg) {
  LyapunovSampling s;
  s.mode = parse_sampling(cfg.lyapunov_sampling);
  s.samples = cfg.lyapunov_samples;
  s.x0 = cfg.phase;
  return s;
}

std::vector<double> energies_or_grid(const std::vector<double>& given, const ExperimentConfig& cfg) {
  if (!given.empty()) return given;
  return linspace(0.25 * cfg.lambda, 0.75 * cfg.lambda, static_cast<std::size_t>(cfg.energy_points));
}

double rho_for(const ExperimentConfig& cfg) { return er_estimate(cfg.continued_fraction()).tail_ratio; }

bool is_sawtooth(const ExperimentConfig& cfg) { return cfg.potential == "sawtooth"; }

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  int n = 34;
  std::string bc = "periodic";
  bool curves = false;
  int density = 8;
};

int cmd_spectrum(const ExperimentConfig& cfg, const Common& c, const SpectrumArgs& a) {
  const fs::path dir = prepare(cfg, c.threads);
  const OperatorSpec spec = cfg.spec();
  const Boundary bc = parse_boundary(a.bc);
  const auto h = build(spec, a.n, bc);
  const auto s = compute_spectrum(h, cfg.eigenvalue_tolerance);
  {
    CsvWriter csv(dir / "spectrum.csv", {"index", "mu", "n", "bc"});
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      csv << static_cast<long long>(i) << s.eigenvalues[i] << a.n << to_string(bc);
      csv.end_row();
    }
    if (c.plot) cli::write_plot_stub(dir / "spectrum.gp", "spectrum.csv", 1, 2, "index", "mu");
  }
  json summary = {{"n", a.n}, {"bc", to_string(bc)}, {"count", s.eigenvalues.size()},
                  {"residualOk", spectrum_residual_ok(h, s)}};
  bool ok = summary["residualOk"].get<bool>();
  if (a.curves) {
    const auto grid = curve_grid(a.n, spec.alpha(), a.density);
    const auto set = eigencurves(spec, a.n, {}, grid, cfg.eigenvalue_tolerance);
    CsvWriter csv(dir / "curves.csv", {"level", "x", "mu", "is_left_limit"});
    for (const auto& curve : set.curves) {
      for (const auto& p : curve.samples) {
        csv << curve.level << p.x << p.mu << (p.left_limit ? 1 : 0);
        csv.end_row();
      }
    }
    const auto& r = set.report;
    summary["curves"] = {{"gridPoints", grid.size()},
                         {"interlacingViolations", r.interlacing_violations},
                         {"jumpSignViolations", r.jump_sign_violations},
                         {"slopeViolations", r.slope_violations},
                         {"minSlope", r.min_slope},
                         {"maxSlope", r.max_slope},
                         {"slopeLower", r.slope_lower},
                         {"slopeUpper", r.slope_upper}};
    ok = ok && r.interlacing_violations == 0 && r.jump_sign_violations == 0 && r.slope_violations == 0;
    if (c.plot) cli::write_plot_stub(dir / "curves.gp", "curves.csv", 2, 3, "x", "mu");
    std::cout << "curves: " << set.curves.size() << " levels on " << grid.size() << " phases, slope in ["
              << fmt(r.min_slope) << ", " << fmt(r.max_slope) << "], violations " << r.interlacing_violations << "/"
              << r.jump_sign_violations << "/" << r.slope_violations << "\n";
  }
  summary["pass"] = ok;
  cli::write_json(dir / "spectrum.json", summary);
  std::cout << "spectrum: " << s.eigenvalues.size() << " eigenvalues in [" << fmt(s.eigenvalues.front()) << ", "
            << fmt(s.eigenvalues.back()) << "]\n";
  return ok ? 0 : 1;
}

int cmd_ids(const ExperimentConfig& cfg, const Common& c) {
  const fs::path dir = prepare(cfg, c.threads);
  const OperatorSpec spec = cfg.spec();
  const Boundary bc = parse_boundary(cfg.ids_bc);
  const auto table = ids_estimate(spec, cfg.ids_n, ids_energy_grid(cfg.lambda, cfg.energy_step), cfg.phase_samples, bc);
  {
    CsvWriter csv(dir / "ids.csv", {"E", "N", "n", "samples", "bc"});
    for (std::size_t i = 0; i < table.E.size(); ++i) {
      csv << table.E[i] << table.N[i] << table.n << table.samples << to_string(bc);
      csv.end_row();
    }
  }
  if (c.plot) cli::write_plot_stub(dir / "ids.gp", "ids.csv", 1, 2, "E", "N(E)");
  json summary = {{"n", table.n}, {"samples", table.samples}, {"measure", spectrum_measure(table)}};
  bool ok = true;
  if (cfg.lambda > 0.0) {
    const double rho = rho_for(cfg);
    const auto lip = lipschitz_modulus(table, cfg.lambda, spec.potential.gamma_minus(), rho);
    summary.update({{"maxSlope", lip.max_slope}, {"maxSlopeAt", lip.max_slope_at}, {"bound", lip.bound},
                    {"slack", lip.slack}, {"rho", rho}, {"pass", lip.pass}});
    ok = lip.pass;
    std::cout << "ids: max slope " << fmt(lip.max_slope) << " at E=" << fmt(lip.max_slope_at) << ", bound "
              << fmt(lip.bound) << " (rho " << fmt(rho) << ")";
    if (is_sawtooth(cfg)) {
      const auto strict = lipschitz_modulus(table, cfg.lambda, 1.0, 0.0);
      summary["sawtoothBound"] = strict.bound;
      summary["sawtoothPass"] = strict.pass;
      ok = ok && strict.pass;
      std::cout << ", rho=0 bound " << fmt(strict.bound);
    }
    std::cout << (ok ? " pass\n" : " FAIL\n");
  } else {
    summary["pass"] = true;
    std::cout << "ids: lambda = 0, no Lipschitz bound\n";
  }
  summary["pass"] = ok;
  cli::write_json(dir / "ids.json", summary);
  return ok ? 0 : 1;
}

int cmd_lyapunov(const ExperimentConfig& cfg, const Common& c, const std::vector<double>& given) {
  const fs::path dir = prepare(cfg, c.threads);
  const OperatorSpec spec = cfg.spec();
  const auto energies = energies_or_grid(given, cfg);
  const auto curve = lyapunov_curve(spec, cfg.lyapunov_n, energies, sampling_of(cfg));
  const std::string sampling = curve.sampling.describe(cfg.lyapunov_n);
  {
    CsvWriter csv(dir / "lyapunov.csv", {"E", "gamma_n", "n", "sampling", "stderr_estimate"});
    for (std::size_t i = 0; i < energies.size(); ++i) {
      csv << energies[i] << curve.gamma[i] << curve.n << sampling << curve.stderr_estimate[i];
      csv.end_row();
    }
  }
  if (c.plot) cli::write_plot_stub(dir / "lyapunov.gp", "lyapunov.csv", 1, 2, "E", "gamma_n");
  const double rho = is_sawtooth(cfg) ? 0.0 : rho_for(cfg);
  const double bound = lyapunov_lower_bound(cfg.lambda, spec.potential.gamma_minus(), rho);
  const double min_gamma = *std::min_element(curve.gamma.begin(), curve.gamma.end());
  const bool ok = min_gamma >= bound - 0.05;
  cli::write_json(dir / "lyapunov.json", {{"points", energies.size()},
                                          {"n", cfg.lyapunov_n},
                                          {"sampling", sampling},
                                          {"minGamma", min_gamma},
                                          {"lowerBound", bound},
                                          {"rho", rho},
                                          {"pass", ok}});
  for (std::size_t i = 0; i < energies.size() && i < 10; ++i) {
    std::cout << "E=" << fmt(energies[i]) << " gamma_n=" << fmt(curve.gamma[i]) << "\n";
  }
  if (energies.size() > 10) std::cout << "... (" << energies.size() << " energies)\n";
  std::cout << "min gamma_n " << fmt(min_gamma) << ", lower bound " << fmt(bound) << (ok ? " pass\n" : " FAIL\n");
  return ok ? 0 : 1;
}

int cmd_thouless(const ExperimentConfig& cfg, const Common& c, const std::vector<double>& given) {
  const fs::path dir = prepare(cfg, c.threads);
  const OperatorSpec spec = cfg.spec();
  const auto energies = energies_or_grid(given, cfg);
  const auto curve = lyapunov_curve(spec, cfg.lyapunov_n, energies, sampling_of(cfg));
  const auto table = ids_estimate(spec, cfg.ids_n, ids_energy_grid(cfg.lambda, cfg.energy_step), cfg.phase_samples,
                                  parse_boundary(cfg.ids_bc));
  double worst = 0.0;
  {
    CsvWriter csv(dir / "thouless.csv", {"E", "thouless", "gamma_n", "difference"});
    for (std::size_t i = 0; i < energies.size(); ++i) {
      const double t = thouless(table, energies[i]).value;
      const double d = std::fabs(t - curve.gamma[i]);
      worst = std::max(worst, d);
      csv << energies[i] << t << curve.gamma[i] << d;
      csv.end_row();
    }
  }
  if (c.plot) cli::write_plot_stub(dir / "thouless.gp", "thouless.csv", 1, 2, "E", "thouless");
  const bool ok = worst <= 0.05;
  cli::write_json(dir / "thouless.json", {{"points", energies.size()}, {"maxDifference", worst}, {"pass", ok}});
  std::cout << "thouless: max |thouless - gamma_n| " << fmt(worst) << (ok ? " pass\n" : " FAIL\n");
  return ok ? 0 : 1;
}

int cmd_ldt(const ExperimentConfig& cfg, const Common& c, std::vector<double> given) {
  const fs::path dir = prepare(cfg, c.threads);
  const OperatorSpec spec = cfg.spec();
  if (given.empty()) given = {0.3 * cfg.lambda, 0.5 * cfg.lambda, 0.7 * cfg.lambda};
  json reports = json::array();
  bool ok = true;
  CsvWriter cover(dir / "covering.csv", {"q", "E", "start", "end"});
  for (double E : given) {
    const double gamma = lyapunov_finite(spec, cfg.lyapunov_n, E, sampling_of(cfg)).gamma;
    const double delta = cfg.ldt_delta_fraction * gamma;
    double previous = 2.0;
    std::cout << "E=" << fmt(E) << " gamma=" << fmt(gamma) << ":";
    for (auto q : cfg.scales) {
      const int grid = std::max<int>(cfg.ldt_grid, static_cast<int>(100 * q));
      const auto d = deviation_set(spec, static_cast<int>(q), E, delta, gamma, grid);
      const auto split = cluster_split(spec, static_cast<int>(q), cfg.phase, E);
      const bool decreasing = d.measure < previous;
      ok = ok && decreasing && d.intervals <= q;
      previous = d.measure;
      reports.push_back({{"q", q},
                         {"E", E},
                         {"delta", delta},
                         {"gamma", gamma},
                         {"measure", d.measure},
                         {"refinedMeasure", d.refined_measure},
                         {"intervals", d.intervals},
                         {"maxIntervalLen", d.max_interval_length},
                         {"fittedC1", split.fitted_c1}});
      for (const auto& [lo, hi] : d.covering) {
        cover << q << E << lo << hi;
        cover.end_row();
      }
      std::cout << " q=" << q << " measure " << fmt(d.measure) << " (" << d.intervals << " intervals)";
    }
    std::cout << "\n";
  }
  cli::write_json(dir / "ldt.json", {{"reports", reports}, {"pass", ok}});
  return ok ? 0 : 1;
}

int cmd_localize(const ExperimentConfig& cfg, const Common& c) {
  const fs::path dir = prepare(cfg, c.threads);
  const OperatorSpec spec = cfg.spec();
  const int n = cfg.localize_box;
  const auto pairs = box_eigenpairs_by_index(spec, n, n / 4, 3 * n / 4);
  LyapunovSampling sampling = sampling_of(cfg);
  sampling.samples = 8;
  std::vector<double> gammas(pairs.size());
  std::vector<DecayFit> fits(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    gammas[i] = lyapunov_finite(spec, cfg.lyapunov_n, pairs[i].E, sampling).gamma;
    fits[i] = decay_fit(pairs[i], gammas[i], 0.15 * gammas[i]);
  });
  int conclusive = 0;
  int localized = 0;
  {
    CsvWriter csv(dir / "pairs.csv", {"E", "n0", "rate", "R2", "verdict", "gammaE"});
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      csv << pairs[i].E << pairs[i].n0 << fits[i].rate << fits[i].r2 << to_string(fits[i].verdict) << gammas[i];
      csv.end_row();
      if (fits[i].verdict == Verdict::Inconclusive) continue;
      ++conclusive;
      localized += fits[i].verdict == Verdict::Localized;
    }
  }
  if (c.plot) cli::write_plot_stub(dir / "pairs.gp", "pairs.csv", 1, 3, "E", "fitted rate");
  const double fraction = conclusive > 0 ? static_cast<double>(localized) / conclusive : 0.0;
  const bool ok = conclusive > 0 && fraction >= 0.9;
  cli::write_json(dir / "summary.json", {{"box", n},
                                         {"pairs", pairs.size()},
                                         {"conclusive", conclusive},
                                         {"localized", localized},
                                         {"fraction", fraction},
                                         {"pass", ok}});
  std::cout << "localize: " << localized << "/" << conclusive << " conclusive pairs localized (" << pairs.size()
            << " pairs)" << (ok ? " pass\n" : " FAIL\n");
  return ok ? 0 : 1;
}

struct ArithArgs {
  double tau = 1.0;
  double C = 0.0;
  long long horizon = 0;
};

int cmd_arith(const ExperimentConfig& cfg, const Common& c, const ArithArgs& a) {
  const fs::path dir = prepare(cfg, c.threads);
  const auto cf = cfg.continued_fraction();
  const auto good = good_denominators(cf, cfg.er);
  auto is_good = [&](int k) {
    return std::any_of(good.begin(), good.end(), [k](const GoodDenominator& g) { return g.k == k; });
  };
  {
    CsvWriter csv(dir / "arith.csv", {"k", "a", "p", "q", "error", "good"});
    std::cout << "k   a   q\n";
    for (int k = 1; k <= cf.depth(); ++k) {
      csv << k << static_cast<long long>(cf.a(k)) << to_string(cf.p(k)) << to_string(cf.q(k))
          << static_cast<double>(cf.convergent_error(k)) << (is_good(k) ? 1 : 0);
      csv.end_row();
      std::cout << k << "   " << cf.a(k) << "   " << to_string(cf.q(k)) << "\n";
    }
  }
  if (c.plot) cli::write_plot_stub(dir / "arith.gp", "arith.csv", 1, 5, "k", "q_k alpha - p_k");
  bool ok = true;
  {
    CsvWriter csv(dir / "gaps.csv", {"k", "q", "large_count", "small_count", "large_len", "small_len",
                                     "predicted_large", "predicted_small", "counts_match", "bounds_hold"});
    for (int k = 1; k < cf.depth(); ++k) {
      if (cf.q(k) > 200000) break;
      const auto g = gap_structure(cf, k);
      ok = ok && g.counts_match && g.bounds_hold;
      csv << k << static_cast<long long>(g.qk) << static_cast<long long>(g.large_count)
          << static_cast<long long>(g.small_count) << g.large_len << g.small_len << g.predicted_large_len
          << g.predicted_small_len << (g.counts_match ? 1 : 0) << (g.bounds_hold ? 1 : 0);
      csv.end_row();
    }
  }
  const auto er = er_estimate(cf);
  json summary = {{"frequency", cfg.frequency},
                  {"depth", cf.depth()},
                  {"erEstimate", {{"min", er.min_ratio}, {"argminK", er.argmin_k}, {"tail", er.tail_ratio}}},
                  {"goodDenominators", json::array()},
                  {"gapsPass", ok}};
  for (const auto& g : good) summary["goodDenominators"].push_back({{"k", g.k}, {"q", g.q}, {"ratio", g.ratio}});
  if (a.horizon > 0) {
    const auto d = diophantine_check(cf, {a.C, a.tau, a.horizon});
    summary["diophantine"] = {{"C", a.C}, {"tau", a.tau}, {"horizon", a.horizon}, {"holds", d.holds},
                              {"worstN", d.worst_n}, {"worstRatio", d.worst_ratio}};
    ok = ok && d.holds;
    std::cout << "diophantine: min ||n alpha|| n^tau = " << fmt(d.worst_ratio) << " at n=" << d.worst_n
              << (d.holds ? " holds\n" : " FAILS\n");
  }
  summary["pass"] = ok;
  cli::write_json(dir / "arith.json", summary);
  std::cout << "gap structure " << (ok ? "pass" : "FAIL") << ", er estimate " << fmt(er.tail_ratio) << "\n";
  return ok ? 0 : 1;
}

int cmd_verify(const ExperimentConfig& cfg, const Common& c, const std::vector<int>& only) {
  const fs::path dir = prepare(cfg, c.threads);
  auto print = [](const CriterionResult& r) {
    std::printf("[%s] %2d %-30s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str());
    std::fflush(stdout);
  };
  VerifyReport rep;
  if (only.empty()) {
    rep = run_verify(cfg, print);
  } else {
    for (int id : only) {
      if (id < 1 || id >= kCriterionCount) throw ConfigError("--only accepts criteria 1.." + std::to_string(kCriterionCount - 1));
      rep.criteria.push_back(run_criterion(id, cfg));
      print(rep.criteria.back());
    }
  }
  cli::write_json(dir / "verify.json", rep.to_json(cfg));
  std::printf("%s\n", rep.all_pass() ? "all criteria pass" : "some criteria FAIL");
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiperiodic Schroedinger operators with monotone potentials"};
  app.require_subcommand(1);
  Common common;
  SpectrumArgs spectrum_args;
  ArithArgs arith_args;
  std::vector<double> energies;
  std::vector<int> only;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and eigenvalue curves of a finite restriction");
  add_common(spectrum, common);
  spectrum->add_option("--n", spectrum_args.n, "box size")->check(CLI::Range(1, 100000));
  spectrum->add_option("--bc", spectrum_args.bc, "periodic | dirichlet");
  spectrum->add_flag("--curves", spectrum_args.curves, "sample x -> mu_l(x) of the periodic restriction");
  spectrum->add_option("--density", spectrum_args.density, "grid points per smallest breakpoint gap");

  auto* ids = app.add_subcommand("ids", "integrated density of states and its Lipschitz modulus");
  add_common(ids, common);

  auto* lyapunov = app.add_subcommand("lyapunov", "finite-size Lyapunov exponents");
  add_common(lyapunov, common);
  lyapunov->add_option("--E", energies, "energies (default: mid-spectrum grid)")->delimiter(',');

  auto* thouless_cmd = app.add_subcommand("thouless", "Thouless formula against transfer matrices");
  add_common(thouless_cmd, common);
  thouless_cmd->add_option("--E", energies, "energies (default: mid-spectrum grid)")->delimiter(',');

  auto* ldt = app.add_subcommand("ldt", "deviation sets of ln|P_q| across scales");
  add_common(ldt, common);
  ldt->add_option("--E", energies, "energies (default: 0.3, 0.5, 0.7 lambda)")->delimiter(',');

  auto* localize = app.add_subcommand("localize", "eigenpair decay fits in a box");
  add_common(localize, common);

  auto* arith = app.add_subcommand("arith", "continued fraction, gap and Diophantine reports");
  add_common(arith, common);
  arith->add_option("--tau", arith_args.tau, "Diophantine exponent");
  arith->add_option("--C", arith_args.C, "Diophantine constant");
  arith->add_option("--horizon", arith_args.horizon, "check 1 <= n <= horizon (0: skip)");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_common(verify, common);
  verify->add_option("--only", only, "run only these criteria (no determinism rerun)")->delimiter(',');

  auto* presets = app.add_subcommand("presets", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (presets->parsed()) {
      for (const auto& name : preset_names()) std::cout << name << "\n";
      return 0;
    }
    const ExperimentConfig cfg = resolve(common);
    if (spectrum->parsed()) return cmd_spectrum(cfg, common, spectrum_args);
    if (ids->parsed()) return cmd_ids(cfg, common);
    if (lyapunov->parsed()) return cmd_lyapunov(cfg, common, energies);
    if (thouless_cmd->parsed()) return cmd_thouless(cfg, common, energies);
    if (ldt->parsed()) return cmd_ldt(cfg, common, energies);
    if (localize->parsed()) return cmd_localize(cfg, common);
    if (arith->parsed()) return cmd_arith(cfg, common, arith_args);
    if (verify->parsed()) return cmd_verify(cfg, common, only);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
