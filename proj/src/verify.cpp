#include "qploc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracle/dense.hpp"
#include "qploc/arithmetic.hpp"
#include "qploc/cocycle.hpp"
#include "qploc/errors.hpp"
#include "qploc/ids.hpp"
#include "qploc/ldt.hpp"
#include "qploc/localization.hpp"
#include "qploc/numeric.hpp"
#include "qploc/parallel.hpp"
#include "qploc/restriction.hpp"
#include "qploc/spectral.hpp"

namespace qploc {

namespace {

using json = nlohmann::json;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  // 53-bit uniform in [0, 1); avoids distribution objects, whose output is
  // implementation-defined.
  double unit() { return static_cast<double>(g_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  long long integer(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 g_;
};

std::string fmt(double v) { return format_double(v); }

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> mid_spectrum_grid(const ExperimentConfig& cfg) {
  return linspace(0.25 * cfg.lambda, 0.75 * cfg.lambda, static_cast<std::size_t>(cfg.energy_points));
}

LyapunovSampling lyapunov_sampling(const ExperimentConfig& cfg) {
  LyapunovSampling s;
  s.mode = parse_sampling(cfg.lyapunov_sampling);
  s.samples = cfg.lyapunov_samples;
  s.x0 = cfg.phase;
  return s;
}

// -- 1 ----------------------------------------------------------------------

CriterionResult free_chain(const ExperimentConfig& cfg) {
  CriterionResult r;
  const auto t0 = std::chrono::steady_clock::now();
  OperatorSpec spec = cfg.spec().with_lambda(0.0);
  double worst_d = 0.0;
  double worst_p = 0.0;
  for (int n : {5, 200, 2000}) {
    std::vector<double> exact_d, exact_p;
    for (int j = 1; j <= n; ++j) exact_d.push_back(2.0 * std::cos(j * std::numbers::pi / (n + 1)));
    for (int j = 0; j < n; ++j) exact_p.push_back(2.0 * std::cos(2.0 * std::numbers::pi * j / n));
    std::sort(exact_d.begin(), exact_d.end());
    std::sort(exact_p.begin(), exact_p.end());
    const auto d = dirichlet_spectrum(build(spec, n, Boundary::Dirichlet), cfg.eigenvalue_tolerance);
    const auto p = periodic_spectrum(build(spec, n, Boundary::Periodic), cfg.eigenvalue_tolerance);
    for (std::size_t i = 0; i < exact_d.size(); ++i) worst_d = std::max(worst_d, std::fabs(d.eigenvalues[i] - exact_d[i]));
    for (std::size_t i = 0; i < exact_p.size(); ++i) worst_p = std::max(worst_p, std::fabs(p.eigenvalues[i] - exact_p[i]));
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"max_error_dirichlet", worst_d}, {"max_error_periodic", worst_p}, {"sizes", {5, 200, 2000}}};
  r.pass = worst_d <= 1e-10 && worst_p <= 1e-10 && r.seconds < 5.0;
  r.summary = "max |mu - 2cos| dirichlet " + fmt(worst_d) + ", periodic " + fmt(worst_p) + " (limit 1e-10)";
  return r;
}

// -- 2 ----------------------------------------------------------------------

CriterionResult dense_oracle(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec base = cfg.spec();
  Rng rng(0x5eed0002);
  double worst_eig = 0.0;
  double worst_det = 0.0;
  double worst_pdet = 0.0;
  int instances = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = static_cast<int>(rng.integer(1, 64));
    const double lambda = rng.uniform(0.0, 10.0);
    const double x = rng.unit();
    const Boundary bc = i % 2 == 0 ? Boundary::Dirichlet : Boundary::Periodic;
    const double E = rng.uniform(-3.0, lambda + 3.0);
    const OperatorSpec spec = base.with_lambda(lambda).with_phase(x);
    const auto h = build(spec, n, bc);
    const auto dense = h.dense();
    const auto ours = compute_spectrum(h, cfg.eigenvalue_tolerance);
    const auto ref = oracle::symmetric_eigenvalues(dense, n);
    for (int j = 0; j < n; ++j) {
      worst_eig = std::max(worst_eig, std::fabs(ours.eigenvalues[static_cast<std::size_t>(j)] - ref[static_cast<std::size_t>(j)]));
    }
    const double det_ref = oracle::shifted_determinant(dense, n, E);
    if (bc == Boundary::Dirichlet) {
      const ScaledValue d = char_det(h.diag, E);
      worst_det = std::max(worst_det, relative_difference(d, ScaledValue(det_ref)));
    } else if (n >= 3) {
      const auto w = periodic_det(spec, n, E);
      worst_pdet = std::max(worst_pdet, relative_difference(w.value, ScaledValue(det_ref)));
    }
    ++instances;
  }
  r.metrics = {{"instances", instances},
               {"max_eigenvalue_error", worst_eig},
               {"max_det_relative_error", worst_det},
               {"max_periodic_det_relative_error", worst_pdet}};
  r.pass = worst_eig <= 1e-9 && worst_det <= 1e-9 && worst_pdet <= 1e-9;
  r.summary = "eigenvalues " + fmt(worst_eig) + ", P_n " + fmt(worst_det) + ", W_n " + fmt(worst_pdet) +
              " over 100 instances (limit 1e-9)";
  return r;
}

// -- 3 ----------------------------------------------------------------------

CriterionResult transfer_identity_check(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec base = cfg.spec();
  Rng rng(0x5eed0003);
  double worst_entry = 0.0;
  double worst_det = 0.0;
  int cases = 0;
  const int sizes[] = {1, 2, 3, 5, 8, 13, 34, 89, 100, 233, 500, 610, 1000};
  for (int n : sizes) {
    for (int s = 0; s < 4; ++s) {
      const OperatorSpec spec = base.with_phase(rng.unit());
      const double E = rng.uniform(-2.0, base.lambda + 2.0);
      const auto rep = transfer_identity(spec, n, E);
      worst_entry = std::max(worst_entry, rep.max_entry_error);
      worst_det = std::max(worst_det, rep.det_error);
      ++cases;
    }
  }
  r.metrics = {{"cases", cases}, {"max_entry_relative_error", worst_entry}, {"max_det_error", worst_det}, {"max_n", 1000}};
  r.pass = worst_entry <= 1e-8 && worst_det <= 1e-8;
  r.summary = "entry identity " + fmt(worst_entry) + ", |det - 1| (norm-relative) " + fmt(worst_det) +
              " for n <= 1000 (limit 1e-8)";
  return r;
}

// -- 4 ----------------------------------------------------------------------

CriterionResult rank_one(const ExperimentConfig&) {
  CriterionResult r;
  OperatorSpec spec;
  spec.lambda = 2.0;
  int checked = 0;
  int failures = 0;
  double worst_trace = 0.0;
  for (int n : {13, 34}) {
    for (int k = 0; k < n; ++k) {
      const auto j = jump_perturbation(spec, n, k);
      ++checked;
      worst_trace = std::max(worst_trace, std::fabs(j.trace + spec.lambda));
      if (!j.rank_one || !j.trace_ok || j.site != j.expected_site) ++failures;
    }
  }
  r.metrics = {{"breakpoints", checked}, {"failures", failures}, {"max_trace_error", worst_trace}};
  r.pass = failures == 0;
  r.summary = std::to_string(checked) + " breakpoints, " + std::to_string(failures) + " not rank one with trace -lambda";
  return r;
}

// -- 5 ----------------------------------------------------------------------

CriterionResult almost_invariance(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec spec = cfg.spec();
  const auto cf = cfg.continued_fraction();
  bool ok = true;
  json rows = json::array();
  std::ostringstream summary;
  for (auto q : cfg.scales) {
    const int k = cfg.scale_index(q);
    int count = 300;
    AlmostInvarianceReport rep;
    for (;;) {
      rep = almost_invariance_orbit(spec, cf, k, 0.1234567, count, cfg.eigenvalue_tolerance);
      if (rep.full_phases >= 100 || count >= 4800) break;
      count *= 2;
    }
    const bool row_ok = rep.violations == 0 && rep.full_phases >= 100 && rep.max_deficit <= rep.bound + 1e-9;
    ok = ok && row_ok;
    rows.push_back({{"q", q},
                    {"bound", rep.bound},
                    {"max_deficit", rep.max_deficit},
                    {"admissible_phases", rep.full_phases},
                    {"pairs", rep.evaluated},
                    {"violations", rep.violations}});
    summary << "q=" << q << ": " << fmt(rep.max_deficit) << "/" << fmt(rep.bound) << " (" << rep.full_phases
            << " phases) ";
  }
  r.metrics = {{"scales", rows}};
  r.pass = ok;
  r.summary = summary.str() + "deficit/bound";
  return r;
}

// -- 6 ----------------------------------------------------------------------

CriterionResult repulsion(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec spec = cfg.spec();
  const auto cf = cfg.continued_fraction();
  bool ok = true;
  json rows = json::array();
  int total_violations = 0;
  for (auto q : cfg.scales) {
    const int k = cfg.scale_index(q);
    for (int K : {4, 8}) {
      try {
        const auto rep = eigenvalue_repulsion(spec, cf, k, K, cfg.er, cfg.eigenvalue_tolerance);
        ok = ok && rep.holds();
        total_violations += rep.violations;
        rows.push_back({{"q", q},
                        {"K", K},
                        {"bound", rep.bound},
                        {"min_gap", rep.skipped ? json(nullptr) : json(rep.min_gap)},
                        {"checked", rep.checked},
                        {"violations", rep.violations},
                        {"vacuous", rep.skipped},
                        {"left_limit", rep.left_limit}});
      } catch (const PreconditionError& e) {
        ok = false;
        rows.push_back({{"q", q}, {"K", K}, {"error", e.what()}});
      }
    }
  }
  r.metrics = {{"er", cfg.er}, {"cases", rows}};
  r.pass = ok;
  r.summary = std::to_string(rows.size()) + " (q, K) cases, " + std::to_string(total_violations) + " violations";
  return r;
}

// -- 7 ----------------------------------------------------------------------

CriterionResult ids_lipschitz(const ExperimentConfig& cfg) {
  CriterionResult r;
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec base = cfg.spec();
  const auto cf = cfg.continued_fraction();
  const double rho = er_estimate(cf).tail_ratio;
  const bool sawtooth = base.potential.name() == "sawtooth";
  const Boundary bc = parse_boundary(cfg.ids_bc);
  bool ok = true;
  json rows = json::array();
  std::ostringstream summary;
  for (double lambda : {2.0, 10.0}) {
    const OperatorSpec spec = base.with_lambda(lambda);
    const auto grid = ids_energy_grid(lambda, cfg.energy_step);
    const auto table = ids_estimate(spec, cfg.ids_n, grid, cfg.phase_samples, bc);
    const auto lip = lipschitz_modulus(table, lambda, spec.potential.gamma_minus(), rho);
    json row = {{"lambda", lambda}, {"max_slope", lip.max_slope}, {"bound", lip.bound}, {"slack", lip.slack},
                {"pass", lip.pass}, {"within_bound_without_slack", lip.max_slope <= lip.bound * 1.05}};
    ok = ok && lip.pass;
    summary << "lambda=" << fmt(lambda) << ": " << fmt(lip.max_slope) << " vs " << fmt(lip.bound) << "*1.05+"
            << fmt(lip.slack);
    if (sawtooth) {
      const auto strict = lipschitz_modulus(table, lambda, 1.0, 0.0);
      row["rho0_bound"] = strict.bound;
      row["rho0_pass"] = strict.pass;
      row["rho0_within_bound_without_slack"] = strict.max_slope <= strict.bound * 1.05;
      ok = ok && strict.pass;
      summary << " (rho=0 bound " << fmt(strict.bound) << ")";
    }
    summary << "; ";
    rows.push_back(row);
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"rho", rho}, {"n", cfg.ids_n}, {"phases", cfg.phase_samples}, {"dE", cfg.energy_step}, {"runs", rows}};
  r.pass = ok && r.seconds < 120.0;
  r.summary = summary.str() + "max slope vs bound";
  return r;
}

// -- 8 ----------------------------------------------------------------------

CriterionResult lyapunov_bound(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec spec = cfg.spec();
  const auto grid = mid_spectrum_grid(cfg);
  const auto curve = lyapunov_curve(spec, cfg.lyapunov_n, grid, lyapunov_sampling(cfg));
  // The sawtooth admits the bound without the arithmetic factor.
  const bool sawtooth = spec.potential.name() == "sawtooth";
  const double rho = sawtooth ? 0.0 : er_estimate(cfg.continued_fraction()).tail_ratio;
  const double bound = lyapunov_lower_bound(cfg.lambda, spec.potential.gamma_minus(), rho) - 0.05;
  const double worst = *std::min_element(curve.gamma.begin(), curve.gamma.end());
  r.metrics = {{"n", cfg.lyapunov_n}, {"points", grid.size()}, {"min_gamma", worst}, {"bound", bound}, {"rho", rho},
               {"sampling", curve.sampling.describe(cfg.lyapunov_n)}};
  r.pass = worst >= bound;
  r.summary = "min gamma_n " + fmt(worst) + " >= " + fmt(bound) + " on " + std::to_string(grid.size()) + " energies";
  return r;
}

// -- 9 ----------------------------------------------------------------------

CriterionResult thouless_check(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec spec = cfg.spec();
  const Boundary bc = parse_boundary(cfg.ids_bc);
  const auto grid = mid_spectrum_grid(cfg);
  const auto curve = lyapunov_curve(spec, cfg.lyapunov_n, grid, lyapunov_sampling(cfg));
  const auto table = ids_estimate(spec, cfg.ids_n, ids_energy_grid(cfg.lambda, cfg.energy_step), cfg.phase_samples, bc);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::fabs(thouless(table, grid[i]).value - curve.gamma[i]));
  }
  const OperatorSpec free = spec.with_lambda(0.0);
  const auto free_table = ids_estimate(free, cfg.ids_n, ids_energy_grid(0.0, cfg.energy_step), cfg.phase_samples, bc);
  const double at3 = thouless(free_table, 3.0).value;
  const double at0 = thouless(free_table, 0.0).value;
  const double err3 = std::fabs(at3 - std::acosh(1.5));
  const double err0 = std::fabs(at0);
  r.metrics = {{"max_difference", worst}, {"free_E3", at3}, {"free_E3_error", err3}, {"free_E0", at0}};
  r.pass = worst <= 0.05 && err3 <= 0.01 && err0 <= 0.01;
  r.summary = "max |thouless - gamma_n| " + fmt(worst) + " (limit 0.05); free chain errors " + fmt(err3) + ", " +
              fmt(err0) + " (limit 0.01)";
  return r;
}

// -- 10 ---------------------------------------------------------------------

CriterionResult ldt_decay(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec spec = cfg.spec();
  bool ok = true;
  json rows = json::array();
  std::ostringstream summary;
  for (double frac_e : {0.3, 0.5, 0.7}) {
    const double E = frac_e * cfg.lambda;
    const double gamma = lyapunov_finite(spec, cfg.lyapunov_n, E, lyapunov_sampling(cfg)).gamma;
    const double delta = cfg.ldt_delta_fraction * gamma;
    double previous = 2.0;
    json scales = json::array();
    for (auto q : cfg.scales) {
      const int grid = std::max<int>(cfg.ldt_grid, static_cast<int>(100 * q));
      const auto d = deviation_set(spec, static_cast<int>(q), E, delta, gamma, grid);
      const bool decreasing = d.measure < previous;
      const bool covered = d.intervals <= q;
      ok = ok && decreasing && covered;
      previous = d.measure;
      scales.push_back({{"q", q},
                        {"measure", d.measure},
                        {"refined_measure", d.refined_measure},
                        {"intervals", d.intervals},
                        {"max_interval_length", d.max_interval_length},
                        {"strict_decrease", decreasing}});
      summary << d.measure << (q == cfg.scales.back() ? "" : ">");
    }
    summary << " at E=" << fmt(E) << "; ";
    rows.push_back({{"E", E}, {"gamma", gamma}, {"delta", delta}, {"scales", scales}});
  }
  r.metrics = {{"energies", rows}};
  r.pass = ok;
  r.summary = "deviation measure " + summary.str();
  return r;
}

// -- 11 ---------------------------------------------------------------------

CriterionResult localization_check(const ExperimentConfig& cfg) {
  CriterionResult r;
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSpec spec = cfg.spec();
  const int n = cfg.localize_box;
  const auto pairs = box_eigenpairs_by_index(spec, n, n / 4, 3 * n / 4);
  // Per-pair gamma(E): 8 orbit windows of the configured length.
  LyapunovSampling sampling = lyapunov_sampling(cfg);
  sampling.samples = 8;
  std::vector<DecayFit> fits(pairs.size());
  std::vector<double> gammas(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    gammas[i] = lyapunov_finite(spec, cfg.lyapunov_n, pairs[i].E, sampling).gamma;
    fits[i] = decay_fit(pairs[i], gammas[i], 0.15 * gammas[i]);
  });
  int localized = 0;
  int conclusive = 0;
  double worst_residual = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    worst_residual = std::max(worst_residual, pairs[i].residual);
    if (fits[i].verdict == Verdict::Inconclusive) continue;
    ++conclusive;
    localized += fits[i].verdict == Verdict::Localized;
  }
  const double fraction = conclusive > 0 ? static_cast<double>(localized) / conclusive : 0.0;

  Rng rng(0x5eed0011);
  double worst_expansion = 0.0;
  double worst_green = 0.0;
  int windows = 0;
  int redraws = 0;
  while (windows < 100 && redraws < 100000) {
    const auto& p = pairs[static_cast<std::size_t>(rng.integer(0, static_cast<long long>(pairs.size()) - 1))];
    const int n1 = static_cast<int>(rng.integer(1, n - 2));
    const int n2 = std::min(n - 2, n1 + static_cast<int>(rng.integer(0, 99)));
    try {
      const auto c = expansion_reconstruction(spec, p, n1, n2);
      worst_expansion = std::max(worst_expansion, c.max_residual);
      worst_green = std::max(worst_green, c.max_green);
      ++windows;
    } catch (const ConditioningError&) {
      ++redraws;
    }
  }
  r.seconds = elapsed(t0);
  r.metrics = {{"box", n},
               {"pairs", pairs.size()},
               {"conclusive", conclusive},
               {"localized", localized},
               {"fraction", fraction},
               {"max_eigen_residual", worst_residual},
               {"expansion_windows", windows},
               {"expansion_redraws", redraws},
               {"max_expansion_residual", worst_expansion},
               {"max_window_green", worst_green}};
  r.pass = conclusive > 0 && fraction >= 0.9 && windows == 100 && worst_expansion <= 1e-6 && worst_residual <= 1e-8 &&
           r.seconds < 600.0;
  r.summary = std::to_string(localized) + "/" + std::to_string(conclusive) + " conclusive mid-spectrum pairs localized (" +
              fmt(fraction) + "), expansion residual " + fmt(worst_expansion);
  return r;
}

// -- 12 ---------------------------------------------------------------------

CriterionResult green_duality(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec base = cfg.spec();
  Rng rng(0x5eed0012);
  double worst = 0.0;
  double worst_symmetry = 0.0;
  int queries = 0;
  int redraws = 0;
  while (queries < 1000 && redraws < 100000) {
    const OperatorSpec spec = base.with_phase(rng.unit());
    const long long a = rng.integer(-50, 50);
    const long long b = a + rng.integer(0, 63);
    const long long m = rng.integer(a, b);
    const long long k = rng.integer(a, b);
    const double E = rng.uniform(-2.5, base.lambda + 2.5);
    try {
      const double direct = green_element(spec, a, b, m, k, E);
      const double swapped = green_element(spec, a, b, k, m, E);
      const ScaledValue quotient = green_quotient(spec, a, b, m, k, E);
      worst = std::max(worst, relative_difference(quotient, ScaledValue(direct)));
      worst_symmetry = std::max(worst_symmetry, relative_difference(ScaledValue(direct), ScaledValue(swapped)));
      ++queries;
    } catch (const ConditioningError&) {
      ++redraws;
    }
  }
  r.metrics = {{"queries", queries}, {"redraws", redraws}, {"max_relative_error", worst},
               {"max_symmetry_error", worst_symmetry}};
  r.pass = queries == 1000 && worst <= 1e-8;
  r.summary = "max relative difference " + fmt(worst) + " over " + std::to_string(queries) + " queries (limit 1e-8)";
  return r;
}

// -- 13 ---------------------------------------------------------------------

CriterionResult monotonicity(const ExperimentConfig& cfg) {
  CriterionResult r;
  const OperatorSpec spec = cfg.spec();
  Rng rng(0x5eed0013);
  double worst = 0.0;
  int evaluated = 0;
  int skipped = 0;
  int nonpositive = 0;
  while (evaluated < 1000) {
    const double x = rng.unit();
    const double E = rng.uniform(-2.0, spec.lambda + 2.0);
    const double u1 = rng.uniform(-1.0, 1.0);
    const double u2 = rng.uniform(-1.0, 1.0);
    const auto f = monotonicity_form(spec, x, 1e-6, E, u1, u2);
    if (f.skipped) {
      ++skipped;
      continue;
    }
    ++evaluated;
    worst = std::max(worst, f.relative_error);
    nonpositive += !f.positive;
  }
  r.metrics = {{"evaluated", evaluated}, {"skipped", skipped}, {"max_relative_error", worst},
               {"nonpositive", nonpositive}};
  r.pass = worst <= 1e-4 && nonpositive == 0;
  r.summary = "max relative error " + fmt(worst) + " (limit 1e-4), " + std::to_string(nonpositive) +
              " nonpositive of " + std::to_string(evaluated);
  return r;
}

json criteria_document(const std::vector<CriterionResult>& rs) {
  json out = json::array();
  for (const auto& c : rs) {
    out.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"summary", c.summary}, {"metrics", c.metrics}});
  }
  return out;
}

}  // namespace

std::string criterion_name(int id) {
  static const char* names[] = {"",
                                "free-chain-exactness",
                                "oracle-equivalence",
                                "transfer-determinant-identity",
                                "rank-one-jumps",
                                "almost-invariance",
                                "eigenvalue-repulsion",
                                "ids-lipschitz",
                                "lyapunov-lower-bound",
                                "thouless-consistency",
                                "ldt-decay",
                                "localization-end-to-end",
                                "green-duality",
                                "monotonicity-form",
                                "determinism"};
  if (id < 1 || id > kCriterionCount) throw PreconditionError("unknown criterion " + std::to_string(id));
  return names[id];
}

CriterionResult run_criterion(int id, const ExperimentConfig& cfg) {
  using Fn = CriterionResult (*)(const ExperimentConfig&);
  static const Fn table[] = {nullptr,          free_chain,     dense_oracle,       transfer_identity_check,
                             rank_one,         almost_invariance, repulsion,       ids_lipschitz,
                             lyapunov_bound,   thouless_check, ldt_decay,          localization_check,
                             green_duality,    monotonicity};
  if (id < 1 || id >= kCriterionCount) throw PreconditionError("run_criterion: criterion must be in 1..13");
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[id](cfg);
  } catch (const std::exception& e) {
    r = CriterionResult{};
    r.pass = false;
    r.summary = std::string("error: ") + e.what();
    r.metrics = json::object();
  }
  r.id = id;
  r.name = criterion_name(id);
  if (r.seconds == 0.0) r.seconds = elapsed(t0);
  return r;
}

std::vector<CriterionResult> run_core(const ExperimentConfig& cfg, const ProgressFn& progress) {
  std::vector<CriterionResult> out;
  for (int id = 1; id < kCriterionCount; ++id) {
    const auto t0 = std::chrono::steady_clock::now();
    out.push_back(run_criterion(id, cfg));
    out.back().seconds = std::max(out.back().seconds, elapsed(t0));
    if (progress) progress(out.back());
  }
  return out;
}

VerifyReport run_verify(const ExperimentConfig& cfg, const ProgressFn& progress) {
  VerifyReport rep;
  rep.criteria = run_core(cfg, progress);
  const auto t0 = std::chrono::steady_clock::now();
  const int threads = thread_count();
  const int other = threads == 1 ? 4 : 1;
  set_thread_count(other);
  const auto again = run_core(cfg);
  set_thread_count(threads);
  const std::string first = criteria_document(rep.criteria).dump();
  const std::string second = criteria_document(again).dump();
  CriterionResult d;
  d.id = kCriterionCount;
  d.name = criterion_name(kCriterionCount);
  d.pass = first == second;
  d.metrics = {{"threads", {threads, other}}, {"bytes", first.size()}, {"identical", d.pass}};
  d.summary = std::string("suite documents at ") + std::to_string(threads) + " and " + std::to_string(other) +
              " threads are " + (d.pass ? "byte-identical" : "different");
  d.seconds = elapsed(t0);
  rep.criteria.push_back(d);
  if (progress) progress(d);
  return rep;
}

bool VerifyReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

json VerifyReport::to_json(const ExperimentConfig& cfg) const {
  std::ostringstream ini;
  write_config(cfg, ini);
  return {{"config", ini.str()}, {"criteria", criteria_document(criteria)}, {"all_pass", all_pass()}};
}

}  // namespace qploc
