#include "qploc/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qploc/errors.hpp"
#include "qploc/numeric.hpp"
#include "qploc/parallel.hpp"
#include "qploc/restriction.hpp"

namespace qploc {

namespace {

// Two consecutive determinants sharing one binary exponent.
struct DetPair {
  double cur = 1.0;   // P_j
  double prev = 0.0;  // P_{j-1}
  std::int64_t exp2 = 0;

  void step(double t) {  // t = diag - E
    const double next = t * cur - prev;
    prev = cur;
    cur = next;
    const double mx = std::max(std::fabs(cur), std::fabs(prev));
    if (mx == 0.0 || !std::isfinite(mx)) return;
    int k = 0;
    std::frexp(mx, &k);
    const int shift = 1 - k;
    cur = std::ldexp(cur, shift);
    prev = std::ldexp(prev, shift);
    exp2 -= shift;
  }
  ScaledValue value() const { return ScaledValue::from_parts(cur, exp2); }
};

std::vector<double> site_diagonal(const OperatorSpec& spec, long long first_site, int n, bool left_limit) {
  std::vector<double> d(static_cast<std::size_t>(std::max(0, n)));
  for (int m = 0; m < n; ++m) d[static_cast<std::size_t>(m)] = spec.site_value(first_site + m, left_limit);
  return d;
}

ScaledValue signed_power(const ScaledValue& v, int j) { return j % 2 == 0 ? v : -v; }

}  // namespace

std::vector<ScaledValue> det_sequence(const OperatorSpec& spec, int n, double E, long long first_site,
                                      bool left_limit) {
  if (n < 0) throw PreconditionError("det_sequence: n must be >= 0");
  const auto d = site_diagonal(spec, first_site, n, left_limit);
  std::vector<ScaledValue> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  DetPair p;
  out.push_back(p.value());
  for (int j = 0; j < n; ++j) {
    p.step(d[static_cast<std::size_t>(j)] - E);
    out.push_back(p.value());
  }
  return out;
}

ScaledValue char_det(std::span<const double> diag, double E) {
  DetPair p;
  for (double v : diag) p.step(v - E);
  return p.value();
}

ScaledValue char_det(const OperatorSpec& spec, long long first_site, int n, double E, bool left_limit) {
  if (n < 0) throw PreconditionError("char_det: n must be >= 0");
  DetPair p;
  for (int m = 0; m < n; ++m) p.step(spec.site_value(first_site + m, left_limit) - E);
  return p.value();
}

ScaledMatrix transfer_matrix(const OperatorSpec& spec, int n, double E, long long first_site, bool left_limit) {
  if (n < 1) throw PreconditionError("transfer_matrix: n must be >= 1");
  ScaledMatrix m;
  for (int l = 0; l < n; ++l) m.step(E - spec.site_value(first_site + l, left_limit));
  return m;
}

TransferIdentityReport transfer_identity(const OperatorSpec& spec, int n, double E) {
  const ScaledMatrix m = transfer_matrix(spec, n, E);
  const auto px = det_sequence(spec, n, E, 0);
  const auto py = det_sequence(spec, n - 1, E, 1);
  const auto D = [](const std::vector<ScaledValue>& p, int j) {
    return j < 0 ? ScaledValue() : signed_power(p[static_cast<std::size_t>(j)], j);
  };
  const ScaledValue expected[2][2] = {{D(px, n), -D(py, n - 1)}, {D(px, n - 1), -D(py, n - 2)}};
  TransferIdentityReport r;
  r.n = n;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r.max_entry_error = std::max(r.max_entry_error, relative_difference(m.entry(i, j), expected[i][j]));
    }
  }
  // det M_n = 1 is only meaningful relative to ||M_n||^2: the determinant of
  // a hyperbolic product cancels catastrophically.
  const double dm = m.mantissa(0, 0) * m.mantissa(1, 1) - m.mantissa(0, 1) * m.mantissa(1, 0);
  const auto e = std::min<std::int64_t>(m.exponent2(), 1100);
  r.det_error = std::fabs(dm - std::ldexp(1.0, static_cast<int>(-2 * e)));
  return r;
}

PeriodicDet periodic_det(const OperatorSpec& spec, int n, double E, bool left_limit) {
  if (n < 3) throw PreconditionError("periodic_det: n must be >= 3");
  const ScaledValue pn = char_det(spec, 0, n, E, left_limit);
  const ScaledValue pm = char_det(spec, 1, n - 2, E, left_limit);
  const ScaledValue corner(n % 2 == 0 ? 2.0 : -2.0);
  PeriodicDet r;
  r.value = pn - pm - corner;
  const double largest = std::max({pn.log_abs(), pm.log_abs(), std::log(2.0)});
  r.relative_loss = r.value.is_zero() ? std::numeric_limits<double>::infinity()
                                      : std::exp(largest - r.value.log_abs());
  r.cancellation = r.relative_loss > 1e6;
  return r;
}

// ---------------------------------------------------------------------------

const char* to_string(Sampling s) { return s == Sampling::Birkhoff ? "birkhoff" : "grid"; }

Sampling parse_sampling(std::string_view text) {
  if (text == "birkhoff") return Sampling::Birkhoff;
  if (text == "grid") return Sampling::Grid;
  throw PreconditionError("unknown sampling '" + std::string(text) + "' (expected birkhoff or grid)");
}

std::string LyapunovSampling::describe(int n) const {
  if (mode == Sampling::Birkhoff) {
    return "birkhoff:" + std::to_string(static_cast<long long>(n) * samples);
  }
  return "grid:" + std::to_string(samples);
}

LyapunovPoint lyapunov_finite(const OperatorSpec& spec, int n, double E, const LyapunovSampling& sampling) {
  if (n < 1) throw PreconditionError("lyapunov_finite: n must be >= 1");
  if (sampling.samples < 1) throw PreconditionError("lyapunov_finite: need at least one sample");
  const auto S = static_cast<std::size_t>(sampling.samples);
  std::vector<double> values(S);
  for (std::size_t s = 0; s < S; ++s) {
    ScaledMatrix m;
    if (sampling.mode == Sampling::Birkhoff) {
      m = transfer_matrix(spec.with_phase(sampling.x0), n, E, static_cast<long long>(s) * n);
    } else {
      m = transfer_matrix(spec.with_phase(static_cast<double>(s) / static_cast<double>(S)), n, E);
    }
    values[s] = m.log_spectral_norm() / n;
  }
  LyapunovPoint p;
  p.E = E;
  p.n = n;
  p.gamma = pairwise_mean(values);
  if (S > 1) {
    std::vector<double> sq(S);
    for (std::size_t s = 0; s < S; ++s) sq[s] = (values[s] - p.gamma) * (values[s] - p.gamma);
    p.stderr_estimate = std::sqrt(pairwise_sum(sq) / static_cast<double>(S - 1) / static_cast<double>(S));
  }
  return p;
}

LyapCurve lyapunov_curve(const OperatorSpec& spec, int n, std::span<const double> energies,
                         const LyapunovSampling& sampling) {
  LyapCurve c;
  c.n = n;
  c.sampling = sampling;
  c.E.assign(energies.begin(), energies.end());
  c.gamma.resize(energies.size());
  c.stderr_estimate.resize(energies.size());
  parallel_for(energies.size(), [&](std::size_t i) {
    const auto p = lyapunov_finite(spec, n, energies[i], sampling);
    c.gamma[i] = p.gamma;
    c.stderr_estimate[i] = p.stderr_estimate;
  });
  return c;
}

double lyapunov_lower_bound(double lambda, double gamma_minus, double rho) {
  if (lambda <= 0.0) return 0.0;
  return std::max(0.0, std::log(lambda) - std::log(2.0 * std::numbers::e / ((1.0 - rho) * gamma_minus)));
}

UpperBoundReport upper_bound_check(const OperatorSpec& spec, std::span<const int> ns, double E, double kappa,
                                   std::span<const double> xs, double gamma) {
  UpperBoundReport r;
  r.E = E;
  r.gamma = gamma;
  r.kappa = kappa;
  r.rows.resize(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    UpperBoundRow& row = r.rows[i];
    row.n = ns[i];
    row.max_excess = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
      const double excess = char_det(spec.with_phase(x), 0, ns[i], E).log_abs() - ns[i] * (gamma + kappa);
      row.max_excess = std::max(row.max_excess, excess);
      if (excess > 0.0) ++row.violations;
    }
  });
  std::size_t first_clean = ns.size();
  for (std::size_t i = ns.size(); i-- > 0;) {
    if (r.rows[i].violations > 0) break;
    first_clean = i;
  }
  r.threshold_n = first_clean < ns.size() ? ns[first_clean] : -1;
  return r;
}

ThoulessResult thouless(const IdsTable& ids, double E) {
  if (ids.E.size() < 2 || ids.E.size() != ids.N.size()) throw PreconditionError("thouless: table too small");
  // F(u) = u ln|u| - u is an antiderivative of ln|u| with F(0) = 0.
  const auto F = [](double u) { return u == 0.0 ? 0.0 : u * std::log(std::fabs(u)) - u; };
  std::vector<double> terms;
  terms.reserve(ids.E.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i + 1 < ids.E.size(); ++i) {
    const double mass = ids.N[i + 1] - ids.N[i];
    if (!(mass > 1e-12)) continue;
    const double a = ids.E[i];
    const double b = ids.E[i + 1];
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    const double integral = F(b - E) - F(a - E);
    terms.push_back(mass * integral / (b - a));
  }
  ThoulessResult r;
  r.value = pairwise_sum(terms);
  r.truncated = E < lo - 10.0 || E > hi + 10.0;
  return r;
}

MonotonicityForm monotonicity_form(const OperatorSpec& spec, double x, double h, double E, double u1, double u2) {
  if (u1 == 0.0 && u2 == 0.0) throw PreconditionError("monotonicity_form: u must be nonzero");
  if (!(h > 0.0)) throw PreconditionError("monotonicity_form: h must be positive");
  MonotonicityForm r;
  const long double alpha = spec.alpha();
  const auto near_kink = [&](long double y) {
    const double f = static_cast<double>(frac(y));
    if (f <= h || f >= 1.0 - h) return true;
    for (double k : spec.potential.kinks()) {
      if (std::fabs(f - k) <= h) return true;
    }
    return false;
  };
  if (near_kink(x) || near_kink(static_cast<long double>(x) + alpha)) {
    r.skipped = true;
    return r;
  }
  const double lam = spec.lambda;
  const auto V = [&](long double y) { return lam * spec.potential.value(static_cast<double>(frac(y))); };
  const auto z = [&](double y, double out[2]) {
    const double w1 = (E - V(y)) * u1 - u2;
    const double w2 = u1;
    out[0] = (E - V(static_cast<long double>(y) + alpha)) * w1 - w2;
    out[1] = w1;
  };
  double zp[2], zm[2], z0[2];
  z(x + h, zp);
  z(x - h, zm);
  z(x, z0);
  const double dz0 = (zp[0] - zm[0]) / (2.0 * h);
  const double dz1 = (zp[1] - zm[1]) / (2.0 * h);
  // J z = (-z1, z0)
  r.finite_difference = dz0 * (-z0[1]) + dz1 * z0[0];
  const double d0 = lam * spec.potential.derivative(static_cast<double>(frac(x)));
  const double d1 = lam * spec.potential.derivative(static_cast<double>(frac(static_cast<long double>(x) + alpha)));
  const double w = (V(x) - E) * u1 + u2;
  r.closed_form = d0 * u1 * u1 + d1 * w * w;
  r.relative_error = std::fabs(r.finite_difference - r.closed_form) / std::max(std::fabs(r.closed_form), 1e-300);
  r.positive = r.finite_difference > 0.0 && r.closed_form > 0.0;
  return r;
}

}  // namespace qploc
