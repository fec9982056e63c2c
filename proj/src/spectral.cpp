#include "qploc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qploc/errors.hpp"
#include "qploc/numeric.hpp"
#include "qploc/parallel.hpp"

namespace qploc {

namespace {

constexpr double kPivotFloor = 1e-290;

inline double guard(double d) { return std::fabs(d) < kPivotFloor ? -kPivotFloor : d; }

int small_periodic_count(std::span<const double> diag, double E) {
  if (diag.size() == 1) return diag[0] + 2.0 < E ? 1 : 0;
  const double mid = 0.5 * (diag[0] + diag[1]);
  const double rad = std::hypot(0.5 * (diag[0] - diag[1]), 2.0);
  return (mid - rad < E ? 1 : 0) + (mid + rad < E ? 1 : 0);
}

// Bisection on an integer count function, splitting brackets so that each
// count evaluation refines every eigenvalue inside the current bracket.
template <typename Count>
std::vector<double> bisect_all(int n, double lo, double hi, double tol, Count&& count) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  struct Bracket {
    double lo, hi;
    int clo, chi;
  };
  const int c_lo = count(lo);
  const int c_hi = count(hi);
  if (c_lo != 0 || c_hi != n) {
    throw PrecisionError("bisection: Gershgorin bracket does not enclose the spectrum (counts " +
                         std::to_string(c_lo) + ", " + std::to_string(c_hi) + " of " + std::to_string(n) + ")");
  }
  std::vector<Bracket> stack{{lo, hi, c_lo, c_hi}};
  while (!stack.empty()) {
    const Bracket b = stack.back();
    stack.pop_back();
    if (b.chi == b.clo) continue;
    const double mid = 0.5 * (b.lo + b.hi);
    if (b.hi - b.lo <= tol || mid <= b.lo || mid >= b.hi) {
      for (int i = b.clo; i < b.chi; ++i) out[static_cast<std::size_t>(i)] = mid;
      continue;
    }
    // Clamped: a count outside [clo, chi] can only come from rounding.
    const int cm = std::clamp(count(mid), b.clo, b.chi);
    // Upper half first so the lower half is processed next (stack order).
    stack.push_back({mid, b.hi, cm, b.chi});
    stack.push_back({b.lo, mid, b.clo, cm});
  }
  return out;
}

std::pair<double, double> gershgorin(std::span<const double> diag) {
  const auto [mn, mx] = std::minmax_element(diag.begin(), diag.end());
  return {*mn - 2.5, *mx + 2.5};
}

// det(T - E) for the path with diagonal `diag` as mantissa * 2^exp2.
struct ChainDet {
  long double mant = 1.0L;
  long exp2 = 0;
};

ChainDet chain_det(std::span<const double> diag, double E) {
  long double prev = 1.0L;  // P_{j-1}
  long double cur = 1.0L;   // P_j, both scaled by 2^-exp2
  long exp2 = 0;
  bool first = true;
  for (double v : diag) {
    const long double next = (static_cast<long double>(v) - E) * cur - (first ? 0.0L : prev);
    first = false;
    prev = cur;
    cur = next;
    int e = 0;
    (void)std::frexp(std::max(std::fabs(cur), std::fabs(prev)), &e);
    if (e > 64 || e < -64) {
      cur = std::ldexp(cur, -e);
      prev = std::ldexp(prev, -e);
      exp2 += e;
    }
  }
  return {cur, exp2};
}

// Sign of a - b - c for scaled a, b and a plain c.
int sign_of_difference(const ChainDet& a, const ChainDet& b, long double c) {
  const long top = std::max({a.exp2, b.exp2, 0L});
  const long double v = std::ldexp(a.mant, static_cast<int>(std::max(-16000L, a.exp2 - top))) -
                        std::ldexp(b.mant, static_cast<int>(std::max(-16000L, b.exp2 - top))) -
                        std::ldexp(c, static_cast<int>(std::max(-16000L, -top)));
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

void check_tolerance(double tol) {
  if (!(tol >= kMinTolerance)) throw PreconditionError("spectrum: tolerance below 1e-13 is not supported");
}

}  // namespace

int sturm_count(std::span<const double> diag, double E) {
  int negatives = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    d = guard((diag[i] - E) - (i ? 1.0 / d : 0.0));
    negatives += d < 0.0;
  }
  return negatives;
}

namespace {

struct SplitCount {
  int count = 0;
  double gmax = 0.0;  // largest entry of (B - E)^{-1} used
};

// Path B on sites 2..n-1 plus the 2x2 Schur complement on sites {0, 1}
// (Sylvester). Eliminating a single site instead loses half the digits next
// to double eigenvalues of the ring, where every one-site deletion is
// singular as well.
SplitCount two_site_count(std::span<const double> diag, double E, bool via_determinants) {
  const std::size_t n = diag.size();
  SplitCount r;
  double d = 1.0;
  double mant = 1.0;
  long exp2 = 0;
  for (std::size_t i = 2; i < n; ++i) {
    d = guard((diag[i] - E) - (i > 2 ? 1.0 / d : 0.0));
    r.count += d < 0.0;
    int e = 0;
    mant = std::frexp(mant * d, &e);
    exp2 += e;
  }
  const double g_last = 1.0 / d;
  double b = diag[n - 1] - E;
  for (std::size_t i = n - 1; i-- > 2;) b = guard((diag[i] - E) - 1.0 / b);
  const double g_first = n == 3 ? g_last : 1.0 / b;
  // G(2, n-1) = (-1)^{m+1} / det(B - E) with m = n - 2 sites.
  const double inv_det = exp2 > 1000 ? 0.0 : std::ldexp(1.0 / mant, static_cast<int>(-exp2));
  const double g_corner = (n % 2 == 1 ? 1.0 : -1.0) * inv_det;
  r.gmax = std::max({std::fabs(g_last), std::fabs(g_first), std::fabs(g_corner)});
  const double s00 = (diag[0] - E) - g_last;
  const double s11 = (diag[1] - E) - g_first;
  const double s01 = 1.0 - g_corner;
  const double trace = s00 + s11;
  int det_sign = 0;
  if (!via_determinants) {
    const double det = s00 * s11 - s01 * s01;
    det_sign = det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  } else {
    // Next to a pole of (B - E)^{-1} the entries share one large rank-one
    // part and s00 s11 - s01^2 cancels; det S = det(A - E) / det(B - E) with
    // det(A - E) = P_{0..n-1} - P_{1..n-2} - 2 (-1)^n does not.
    const int w = sign_of_difference(chain_det(diag, E), chain_det(diag.subspan(1, n - 2), E),
                                     n % 2 == 0 ? 2.0L : -2.0L);
    det_sign = w * (mant > 0.0 ? 1 : -1);
  }
  if (det_sign < 0) {
    r.count += 1;
  } else if (det_sign > 0) {
    r.count += trace < 0.0 ? 2 : 0;
  } else {
    r.count += trace < 0.0 ? 1 : 0;
  }
  return r;
}

constexpr double kResolventLimit = 1e4;

}  // namespace

int periodic_sturm_count(std::span<const double> diag, double E) {
  const std::size_t n = diag.size();
  if (n <= 2) return small_periodic_count(diag, E);
  const SplitCount first = two_site_count(diag, E, false);
  if (first.gmax <= kResolventLimit) return first.count;
  // E sits next to an eigenvalue of the path: split the ring elsewhere.
  std::vector<double> rotated(diag.begin() + static_cast<std::ptrdiff_t>(n / 2), diag.end());
  rotated.insert(rotated.end(), diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(n / 2));
  const SplitCount second = two_site_count(rotated, E, false);
  if (second.gmax <= kResolventLimit) return second.count;
  return first.gmax <= second.gmax ? two_site_count(diag, E, true).count : two_site_count(rotated, E, true).count;
}

int count_below(const FiniteRestriction& h, double E) {
  return h.bc == Boundary::Dirichlet ? sturm_count(h.diag, E) : periodic_sturm_count(h.diag, E);
}

Spectrum dirichlet_spectrum(const FiniteRestriction& h, double tol) {
  if (h.bc != Boundary::Dirichlet) throw PreconditionError("dirichlet_spectrum: restriction is periodic");
  check_tolerance(tol);
  const auto [lo, hi] = gershgorin(h.diag);
  Spectrum s;
  s.tolerance = tol;
  s.bc = Boundary::Dirichlet;
  s.n = h.n;
  s.eigenvalues = bisect_all(h.n, lo, hi, tol, [&](double E) { return sturm_count(h.diag, E); });
  return s;
}

Spectrum periodic_spectrum(const FiniteRestriction& h, double tol) {
  if (h.bc != Boundary::Periodic) throw PreconditionError("periodic_spectrum: restriction is Dirichlet");
  check_tolerance(tol);
  const auto [lo, hi] = gershgorin(h.diag);
  Spectrum s;
  s.tolerance = tol;
  s.bc = Boundary::Periodic;
  s.n = h.n;
  s.eigenvalues = bisect_all(h.n, lo, hi, tol, [&](double E) { return periodic_sturm_count(h.diag, E); });
  return s;
}

Spectrum compute_spectrum(const FiniteRestriction& h, double tol) {
  return h.bc == Boundary::Dirichlet ? dirichlet_spectrum(h, tol) : periodic_spectrum(h, tol);
}

int counting(const Spectrum& s, double E) {
  return static_cast<int>(std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), E) - s.eigenvalues.begin());
}

bool spectrum_residual_ok(const FiniteRestriction& h, const Spectrum& s) {
  if (static_cast<int>(s.eigenvalues.size()) != h.n) return false;
  for (int i = 0; i < h.n; ++i) {
    const double mu = s.eigenvalues[static_cast<std::size_t>(i)];
    if (count_below(h, mu - s.tolerance) > i) return false;
    if (count_below(h, mu + s.tolerance) <= i) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::vector<double> curve_grid(int n, long double alpha, int density) {
  if (density < 1) throw PreconditionError("curve_grid: density must be >= 1");
  const auto betas = beta_points(n, alpha);
  double min_gap = 1.0 - betas.back().beta;
  for (std::size_t i = 1; i < betas.size(); ++i) min_gap = std::min(min_gap, betas[i].beta - betas[i - 1].beta);
  const double h = min_gap / density;
  std::vector<double> grid;
  for (const auto& b : betas) grid.push_back(b.beta);
  const auto count = static_cast<long>(std::ceil(1.0 / h));
  for (long i = 0; i < count; ++i) {
    const double x = static_cast<double>(i) * h;
    if (x >= 1.0) break;
    grid.push_back(x);
  }
  std::sort(grid.begin(), grid.end());
  // Drop uniform points that crowd a breakpoint; breakpoints always survive.
  std::vector<double> out;
  auto is_break = [&](double x) {
    return std::binary_search(betas.begin(), betas.end(), Breakpoint{x, 0},
                              [](const Breakpoint& a, const Breakpoint& b) { return a.beta < b.beta; });
  };
  for (double x : grid) {
    if (!out.empty() && x - out.back() <= 1e-12) {
      if (is_break(x)) out.back() = x;
      continue;
    }
    out.push_back(x);
  }
  return out;
}

EigenCurveSet eigencurves(const OperatorSpec& spec, int n, std::span<const int> levels, std::span<const double> grid,
                          double tol) {
  const auto betas = beta_points(n, spec.alpha());
  std::vector<double> beta_values;
  for (const auto& b : betas) beta_values.push_back(b.beta);
  for (double b : beta_values) {
    if (!std::binary_search(grid.begin(), grid.end(), b)) {
      throw PreconditionError("eigencurves: grid must contain every breakpoint");
    }
  }
  std::vector<int> wanted(levels.begin(), levels.end());
  if (wanted.empty()) {
    for (int l = 0; l < n; ++l) wanted.push_back(l);
  }
  for (int l : wanted) {
    if (l < 0 || l >= n) throw PreconditionError("eigencurves: level out of range");
  }

  std::vector<Spectrum> right(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    right[i] = periodic_spectrum(build(spec.with_phase(grid[i]), n, Boundary::Periodic, false), tol);
  });
  std::vector<Spectrum> left(betas.size());
  parallel_for(betas.size(), [&](std::size_t k) {
    left[k] = periodic_spectrum(build(spec.with_phase(beta_values[k]), n, Boundary::Periodic, true), tol);
  });

  EigenCurveSet set;
  set.grid.assign(grid.begin(), grid.end());
  EigenCurveReport& rep = set.report;
  rep.slope_lower = spec.lambda * spec.potential.gamma_minus();
  rep.slope_upper = spec.lambda * spec.potential.gamma_plus();
  rep.min_slope = std::numeric_limits<double>::infinity();
  rep.max_slope = -std::numeric_limits<double>::infinity();

  // Interlacing across every breakpoint, all levels.
  const double slack = 10.0 * tol;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const auto& L = left[k].eigenvalues;
    const auto& R = right[static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), beta_values[k]) - grid.begin())].eigenvalues;
    for (int l = 0; l + 1 < n; ++l) {
      const auto u = static_cast<std::size_t>(l);
      const double e1 = L[u] - R[u + 1];
      const double e2 = R[u + 1] - L[u + 1];
      rep.max_interlacing_excess = std::max({rep.max_interlacing_excess, e1, e2});
      if (e1 > slack || e2 > slack) {
        throw PrecisionError("eigencurves: interlacing violated at breakpoint " + std::to_string(k) + ", level " +
                             std::to_string(l));
      }
    }
  }

  for (int level : wanted) {
    EigenCurve curve;
    curve.level = level;
    const auto li = static_cast<std::size_t>(level);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto it = std::lower_bound(beta_values.begin(), beta_values.end(), grid[i]);
      if (it != beta_values.end() && *it == grid[i]) {
        const auto k = static_cast<std::size_t>(it - beta_values.begin());
        const double mu_left = left[k].eigenvalues[li];
        const double mu_right = right[i].eigenvalues[li];
        curve.samples.push_back({grid[i], mu_left, true});
        curve.jumps.push_back({static_cast<int>(k), grid[i], mu_left, mu_right});
        if (mu_right > mu_left + slack) ++rep.jump_sign_violations;
      }
      curve.samples.push_back({grid[i], right[i].eigenvalues[li], false});
    }
    // Closing sample 1 - 0, identical to beta_0 - 0 by periodicity.
    curve.samples.push_back({1.0, left[0].eigenvalues[li], true});

    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
      const auto& a = curve.samples[i];
      const auto& b = curve.samples[i + 1];
      if (a.left_limit) continue;  // jump from beta - 0 to beta
      const double dx = b.x - a.x;
      if (dx <= 0.0) continue;
      const double slope = (b.mu - a.mu) / dx;
      rep.min_slope = std::min(rep.min_slope, slope);
      rep.max_slope = std::max(rep.max_slope, slope);
      const double s = 1e-6 + 4.0 * tol / dx;
      if (slope < rep.slope_lower - s || slope > rep.slope_upper + s) ++rep.slope_violations;
    }
    set.curves.push_back(std::move(curve));
  }
  return set;
}

// ---------------------------------------------------------------------------

bool almost_invariance_admissible(double x, int r, int k, const ContinuedFraction& cf) {
  const long double alpha = cf.alpha();
  for (int j = 0; j <= r; ++j) {
    const double y = static_cast<double>(frac(static_cast<long double>(x) - static_cast<long double>(j) * alpha));
    if (!indifference_admissible(y, k, cf)) return false;
  }
  return true;
}

AlmostInvarianceReport almost_invariance_deficit(const OperatorSpec& spec, const ContinuedFraction& cf, int k,
                                                 std::span<const int> rs, std::span<const double> xs, double tol) {
  if (k < 1 || k + 1 > cf.depth()) throw PreconditionError("almost_invariance_deficit: k out of range");
  AlmostInvarianceReport rep;
  rep.k = k;
  rep.qk = cf.q64(k);
  const int qk = static_cast<int>(rep.qk);
  for (int r : rs) {
    if (r < 0 || r > qk - 1) throw PreconditionError("almost_invariance_deficit: need 0 <= r <= q_k - 1");
  }
  rep.bound = spec.lambda * spec.potential.gamma_plus() / static_cast<double>(cf.q64(k + 1));

  struct PerPhase {
    double max_deficit = 0.0;
    int evaluated = 0;
    int skipped = 0;
    int violations = 0;
  };
  std::vector<PerPhase> per(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    PerPhase& out = per[i];
    const double x = xs[i];
    Spectrum base;
    bool have_base = false;
    for (int r : rs) {
      if (!almost_invariance_admissible(x, r, k, cf)) {
        ++out.skipped;
        continue;
      }
      ++out.evaluated;
      if (r == 0) continue;
      if (!have_base) {
        base = periodic_spectrum(build(spec.with_phase(x), qk, Boundary::Periodic), tol);
        have_base = true;
      }
      const double shifted_phase =
          static_cast<double>(frac(static_cast<long double>(x) - static_cast<long double>(r) * cf.alpha()));
      const auto other = periodic_spectrum(build(spec.with_phase(shifted_phase), qk, Boundary::Periodic), tol);
      double deficit = 0.0;
      for (int m = 0; m < qk; ++m) {
        const auto u = static_cast<std::size_t>(m);
        deficit = std::max(deficit, std::fabs(base.eigenvalues[u] - other.eigenvalues[u]));
      }
      out.max_deficit = std::max(out.max_deficit, deficit);
      if (deficit > rep.bound + 10.0 * tol) ++out.violations;
    }
  });
  for (const auto& p : per) {
    rep.max_deficit = std::max(rep.max_deficit, p.max_deficit);
    rep.evaluated += p.evaluated;
    rep.skipped += p.skipped;
    rep.violations += p.violations;
    rep.full_phases += p.skipped == 0;
  }
  return rep;
}

AlmostInvarianceReport almost_invariance_orbit(const OperatorSpec& spec, const ContinuedFraction& cf, int k,
                                               double x0, int count, double tol) {
  if (k < 1 || k + 1 > cf.depth()) throw PreconditionError("almost_invariance_orbit: k out of range");
  if (count < 1) throw PreconditionError("almost_invariance_orbit: count must be >= 1");
  AlmostInvarianceReport rep;
  rep.k = k;
  rep.qk = cf.q64(k);
  const int qk = static_cast<int>(rep.qk);
  rep.bound = spec.lambda * spec.potential.gamma_plus() / static_cast<double>(cf.q64(k + 1));

  const auto total = static_cast<std::size_t>(count + qk - 1);
  std::vector<double> phase(total);
  std::vector<char> admissible(total);
  for (std::size_t j = 0; j < total; ++j) {
    phase[j] = static_cast<double>(frac(static_cast<long double>(x0) - static_cast<long double>(j) * cf.alpha()));
    admissible[j] = indifference_admissible(phase[j], k, cf);
  }
  std::vector<Spectrum> spectra(total);
  parallel_for(total, [&](std::size_t j) {
    spectra[j] = periodic_spectrum(build(spec.with_phase(phase[j]), qk, Boundary::Periodic), tol);
  });

  for (int i = 0; i < count; ++i) {
    int skipped_here = 0;
    bool chain_ok = true;
    for (int r = 0; r < qk; ++r) {
      chain_ok = chain_ok && admissible[static_cast<std::size_t>(i + r)];
      if (!chain_ok) {
        ++skipped_here;
        continue;
      }
      ++rep.evaluated;
      const auto& a = spectra[static_cast<std::size_t>(i)].eigenvalues;
      const auto& b = spectra[static_cast<std::size_t>(i + r)].eigenvalues;
      double deficit = 0.0;
      for (std::size_t m = 0; m < a.size(); ++m) deficit = std::max(deficit, std::fabs(a[m] - b[m]));
      rep.max_deficit = std::max(rep.max_deficit, deficit);
      if (deficit > rep.bound + 10.0 * tol) ++rep.violations;
    }
    rep.skipped += skipped_here;
    rep.full_phases += skipped_here == 0;
  }
  return rep;
}

RepulsionReport eigenvalue_repulsion(const OperatorSpec& spec, const ContinuedFraction& cf, int k, int K, double er,
                                     double tol) {
  if (k < 1 || k + 1 > cf.depth()) throw PreconditionError("eigenvalue_repulsion: k out of range");
  RepulsionReport rep;
  rep.k = k;
  rep.qk = cf.q64(k);
  rep.K = K;
  rep.er = er;
  const int qk = static_cast<int>(rep.qk);
  if (K < 1 || K > qk - 1) throw PreconditionError("eigenvalue_repulsion: need 1 <= K <= q_k - 1");
  const double ratio = static_cast<double>(static_cast<long double>(cf.q(k - 1)) / static_cast<long double>(cf.q(k + 1)));
  if (ratio > er) throw PreconditionError("eigenvalue_repulsion: q_k is not a good denominator for er");
  const double qk1 = static_cast<double>(cf.q64(k + 1));
  const double gm = spec.potential.gamma_minus();
  const double gp = spec.potential.gamma_plus();
  rep.bound = spec.lambda * (K * (1.0 - er) * gm / qk - 3.0 * gp / qk1);
  rep.left_limit = k % 2 == 0;
  rep.min_gap = std::numeric_limits<double>::infinity();
  if (rep.bound <= 0.0) {
    rep.skipped = true;
    return rep;
  }
  const auto betas = beta_points(qk, spec.alpha());
  std::vector<double> min_gap(betas.size(), std::numeric_limits<double>::infinity());
  std::vector<int> violations(betas.size(), 0);
  parallel_for(betas.size(), [&](std::size_t l) {
    const auto s = periodic_spectrum(build(spec.with_phase(betas[l].beta), qk, Boundary::Periodic, rep.left_limit), tol);
    for (int m = 0; m + K < qk; ++m) {
      const double gap = s.eigenvalues[static_cast<std::size_t>(m + K)] - s.eigenvalues[static_cast<std::size_t>(m)];
      min_gap[l] = std::min(min_gap[l], gap);
      if (gap < rep.bound - 10.0 * tol) ++violations[l];
    }
  });
  for (std::size_t l = 0; l < betas.size(); ++l) {
    rep.min_gap = std::min(rep.min_gap, min_gap[l]);
    rep.violations += violations[l];
    rep.checked += qk - K;
  }
  return rep;
}

}  // namespace qploc
