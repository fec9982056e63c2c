#include "qploc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qploc/cocycle.hpp"
#include "qploc/errors.hpp"
#include "qploc/numeric.hpp"
#include "qploc/parallel.hpp"
#include "qploc/restriction.hpp"
#include "qploc/spectral.hpp"

namespace qploc {

namespace {

constexpr double kExpansionMinDistance = 1e-6;

constexpr double kEigenvalueGuard = 1e-12;
constexpr double kTiny = 1e-290;

std::vector<double> box_diagonal(const OperatorSpec& spec, long long a, long long b) {
  return build(spec, static_cast<int>(b - a + 1), Boundary::Dirichlet, false, a).diag;
}

void ensure_resolvent(std::span<const double> diag, double E, double guard, const char* who) {
  if (sturm_count(diag, E - guard) == sturm_count(diag, E + guard)) return;
  double best = std::numeric_limits<double>::infinity();
  FiniteRestriction h;
  h.n = static_cast<int>(diag.size());
  h.diag.assign(diag.begin(), diag.end());
  for (double mu : dirichlet_spectrum(h, kMinTolerance).eigenvalues) best = std::min(best, std::fabs(mu - E));
  throw ConditioningError(std::string(who) + ": energy lies within " + std::to_string(best) +
                              " of a box eigenvalue",
                          best);
}

// Solves T u = rhs for T tridiagonal with unit off-diagonals and diagonal
// diag - E, using Gaussian elimination with partial pivoting.
std::vector<double> tridiagonal_solve(std::span<const double> diag, double E, std::vector<double> rhs) {
  const std::size_t N = diag.size();
  std::vector<double> d(N), dl(N, 1.0), du(N, 1.0), du2(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) d[i] = diag[i] - E;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    if (std::fabs(d[i]) >= std::fabs(dl[i])) {
      if (d[i] == 0.0) d[i] = kTiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      rhs[i + 1] -= fact * rhs[i];
      du2[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < N) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double b = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = b - fact * rhs[i + 1];
    }
  }
  if (d[N - 1] == 0.0) d[N - 1] = kTiny;
  rhs[N - 1] /= d[N - 1];
  if (N > 1) rhs[N - 2] = (rhs[N - 2] - du[N - 2] * rhs[N - 1]) / d[N - 2];
  for (std::size_t i = N < 3 ? 0 : N - 2; i-- > 0;) rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
  return rhs;
}

void check_box(long long a, long long b, long long m, long long n) {
  if (b < a) throw PreconditionError("green: need a <= b");
  if (m < a || m > b || n < a || n > b) throw PreconditionError("green: sites must lie in [a, b]");
  if (b - a + 1 > 100000000LL) throw PreconditionError("green: box too large");
}

double log_green_edge(const OperatorSpec& spec, long long first, int len, double E) {
  return char_det(spec, first, len, E).log_abs();
}

}  // namespace

std::vector<double> green_column(const OperatorSpec& spec, long long a, long long b, long long n, double E) {
  check_box(a, b, n, n);
  const auto diag = box_diagonal(spec, a, b);
  ensure_resolvent(diag, E, kEigenvalueGuard, "green_element");
  std::vector<double> rhs(diag.size(), 0.0);
  rhs[static_cast<std::size_t>(n - a)] = 1.0;
  return tridiagonal_solve(diag, E, std::move(rhs));
}

double green_element(const OperatorSpec& spec, long long a, long long b, long long m, long long n, double E) {
  check_box(a, b, m, n);
  return green_column(spec, a, b, n, E)[static_cast<std::size_t>(m - a)];
}

ScaledValue green_quotient(const OperatorSpec& spec, long long a, long long b, long long m, long long n, double E) {
  check_box(a, b, m, n);
  if (m > n) std::swap(m, n);
  const ScaledValue left = char_det(spec, a, static_cast<int>(m - a), E);
  const ScaledValue right = char_det(spec, n + 1, static_cast<int>(b - n), E);
  const ScaledValue whole = char_det(spec, a, static_cast<int>(b - a + 1), E);
  if (whole.is_zero()) throw ConditioningError("green_quotient: box determinant vanishes", 0.0);
  const ScaledValue g = left * right / whole;
  return (m + n) % 2 == 0 ? g : -g;
}

RegularityResult regularity_test(const OperatorSpec& spec, long long m, double mu, int q, double E) {
  if (q < 5) throw PreconditionError("regularity_test: q must be >= 5");
  RegularityResult r;
  const double margin = q / 5.0;
  for (long long n1 = m - q + 1; n1 <= m; ++n1) {
    const long long n2 = n1 + q - 1;
    if (static_cast<double>(m - n1) < margin || static_cast<double>(n2 - m) < margin) continue;
    ++r.windows_checked;
    const double whole = log_green_edge(spec, n1, q, E);
    const double g1 = log_green_edge(spec, m + 1, static_cast<int>(n2 - m), E) - whole;
    const double g2 = log_green_edge(spec, n1, static_cast<int>(m - n1), E) - whole;
    if (g1 < -mu * static_cast<double>(m - n1) && g2 < -mu * static_cast<double>(n2 - m)) {
      r.regular = true;
      r.n1 = n1;
      r.n2 = n2;
      return r;
    }
  }
  return r;
}

SingularSeparation singular_separation(const OperatorSpec& spec, int q, double E, double delta, double gamma,
                                       long long lo, long long hi) {
  if (!(delta > 0.0) || !(gamma > delta)) throw PreconditionError("singular_separation: need gamma > delta > 0");
  if (hi < lo) throw PreconditionError("singular_separation: empty scan range");
  SingularSeparation s;
  s.mu = gamma - delta;
  const auto count = static_cast<std::size_t>(hi - lo + 1);
  std::vector<char> singular(count);
  parallel_for(count, [&](std::size_t i) {
    singular[i] = !regularity_test(spec, lo + static_cast<long long>(i), s.mu, q, E).regular;
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (singular[i]) s.singular.push_back(lo + static_cast<long long>(i));
  }
  const double near = (q + 1) / 2.0;
  for (std::size_t i = 0; i < s.singular.size(); ++i) {
    for (std::size_t j = i + 1; j < s.singular.size(); ++j) {
      const long long d = s.singular[j] - s.singular[i];
      if (static_cast<double>(d) > near) {
        if (s.min_far_distance < 0 || d < s.min_far_distance) s.min_far_distance = d;
        break;
      }
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

EigenPair twisted_vector(std::span<const double> diag, double E) {
  const std::size_t N = diag.size();
  std::vector<double> dp(N), dm(N);
  const auto guard = [](double v) { return std::fabs(v) < kTiny ? -kTiny : v; };
  dp[0] = guard(diag[0] - E);
  for (std::size_t i = 1; i < N; ++i) dp[i] = guard((diag[i] - E) - 1.0 / dp[i - 1]);
  dm[N - 1] = guard(diag[N - 1] - E);
  for (std::size_t i = N - 1; i-- > 0;) dm[i] = guard((diag[i] - E) - 1.0 / dm[i + 1]);
  std::size_t k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i) {
    const double g = std::fabs(dp[i] + dm[i] - (diag[i] - E));
    if (g < best) {
      best = g;
      k = i;
    }
  }
  EigenPair p;
  p.E = E;
  p.n = static_cast<int>(N);
  p.log_abs.assign(N, 0.0);
  std::vector<int> sign(N, 1);
  for (std::size_t i = k; i-- > 0;) {
    p.log_abs[i] = p.log_abs[i + 1] - std::log(std::fabs(dp[i]));
    sign[i] = dp[i] > 0.0 ? -sign[i + 1] : sign[i + 1];
  }
  for (std::size_t i = k + 1; i < N; ++i) {
    p.log_abs[i] = p.log_abs[i - 1] - std::log(std::fabs(dm[i]));
    sign[i] = dm[i] > 0.0 ? -sign[i - 1] : sign[i - 1];
  }
  std::size_t n0 = 0;
  for (std::size_t i = 1; i < N; ++i) {
    if (p.log_abs[i] > p.log_abs[n0]) n0 = i;
  }
  const double shift = p.log_abs[n0];
  const int s0 = sign[n0];
  p.n0 = static_cast<int>(n0);
  p.psi.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    p.log_abs[i] -= shift;
    p.psi[i] = (sign[i] * s0) * std::exp(p.log_abs[i]);
  }
  return p;
}

double residual(std::span<const double> diag, const EigenPair& p) {
  const std::size_t N = diag.size();
  double r = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double v = (diag[i] - p.E) * p.psi[i];
    if (i > 0) v += p.psi[i - 1];
    if (i + 1 < N) v += p.psi[i + 1];
    r = std::max(r, std::fabs(v));
  }
  return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * b[i];
  return pairwise_sum(t);
}

// Rescale so the leftmost maximum is +1; log values fall back to double
// resolution.
void renormalize_from_psi(EigenPair& p) {
  std::size_t n0 = 0;
  for (std::size_t i = 1; i < p.psi.size(); ++i) {
    if (std::fabs(p.psi[i]) > std::fabs(p.psi[n0])) n0 = i;
  }
  const double s = p.psi[n0];
  p.n0 = static_cast<int>(n0);
  for (std::size_t i = 0; i < p.psi.size(); ++i) {
    p.psi[i] /= s;
    p.log_abs[i] = p.psi[i] == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(p.psi[i]));
  }
  p.log_floor = std::log(1e-14);
}

std::vector<EigenPair> eigenpairs_for(const OperatorSpec& spec, int n, const Spectrum& s, std::size_t first,
                                      std::size_t last) {
  const auto h = build(spec, n, Boundary::Dirichlet);
  std::vector<EigenPair> pairs(last - first);
  parallel_for(pairs.size(), [&](std::size_t i) { pairs[i] = twisted_vector(h.diag, s.eigenvalues[first + i]); });
  // Nearly degenerate neighbours may come out non-orthogonal.
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    for (std::size_t j = i; j-- > 0;) {
      if (pairs[i].E - pairs[j].E > 1e-9) break;
      const double nij = dot(pairs[i].psi, pairs[j].psi);
      const double nii = dot(pairs[i].psi, pairs[i].psi);
      const double njj = dot(pairs[j].psi, pairs[j].psi);
      if (std::fabs(nij) <= 1e-6 * std::sqrt(nii * njj)) continue;
      for (std::size_t t = 0; t < pairs[i].psi.size(); ++t) pairs[i].psi[t] -= nij / njj * pairs[j].psi[t];
      renormalize_from_psi(pairs[i]);
    }
  }
  for (auto& p : pairs) p.residual = residual(h.diag, p);
  return pairs;
}

}  // namespace

std::vector<EigenPair> box_eigenpairs(const OperatorSpec& spec, int n, double e_lo, double e_hi) {
  if (n < 1) throw PreconditionError("box_eigenpairs: n must be >= 1");
  const auto s = dirichlet_spectrum(build(spec, n, Boundary::Dirichlet), kMinTolerance);
  const auto first = static_cast<std::size_t>(std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), e_lo) -
                                              s.eigenvalues.begin());
  const auto last = static_cast<std::size_t>(std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), e_hi) -
                                             s.eigenvalues.begin());
  return eigenpairs_for(spec, n, s, first, std::max(first, last));
}

std::vector<EigenPair> box_eigenpairs_by_index(const OperatorSpec& spec, int n, int first, int last) {
  if (n < 1) throw PreconditionError("box_eigenpairs: n must be >= 1");
  if (first < 0 || last > n || first > last) throw PreconditionError("box_eigenpairs: index range out of bounds");
  const auto s = dirichlet_spectrum(build(spec, n, Boundary::Dirichlet), kMinTolerance);
  return eigenpairs_for(spec, n, s, static_cast<std::size_t>(first), static_cast<std::size_t>(last));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Localized: return "localized";
    case Verdict::Extended: return "extended";
    default: return "inconclusive";
  }
}

DecayFit decay_fit(const EigenPair& pair, double gammaE, double delta) {
  DecayFit f;
  const int n = pair.n;
  f.window_lo = n / 20;
  f.window_hi = n / 4;
  const bool conclusive = pair.n0 >= n / 4 && (n - 1 - pair.n0) >= n / 4;
  std::vector<double> xs, ys;
  for (int i = 0; i < n; ++i) {
    const int d = std::abs(i - pair.n0);
    if (d < f.window_lo || d > f.window_hi) continue;
    const double y = pair.log_abs[static_cast<std::size_t>(i)];
    if (!std::isfinite(y) || y < pair.log_floor) continue;
    xs.push_back(-static_cast<double>(d));
    ys.push_back(y);
  }
  f.points = static_cast<int>(xs.size());
  if (xs.size() >= 3) {
    const auto fit = least_squares(xs, ys);
    f.rate = fit.slope;
    f.intercept = fit.intercept;
    f.r2 = fit.r2;
    f.rate_reported = fit.r2 >= 0.9;
  }
  if (!conclusive || xs.size() < 3) {
    f.verdict = Verdict::Inconclusive;
  } else if (f.rate_reported && f.rate >= gammaE - delta) {
    f.verdict = Verdict::Localized;
  } else {
    f.verdict = Verdict::Extended;
  }
  return f;
}

ExpansionCheck expansion_reconstruction(const OperatorSpec& spec, const EigenPair& pair, int n1, int n2) {
  if (n1 < 1 || n2 > pair.n - 2 || n1 > n2) {
    throw PreconditionError("expansion_reconstruction: window must stay strictly inside the box");
  }
  const auto diag = box_diagonal(spec, n1, n2);
  // The reconstruction error is G r for the eigenvector residual r, so a
  // window nearly resonant with E says nothing; refuse it.
  ensure_resolvent(diag, pair.E, kExpansionMinDistance, "expansion_reconstruction");
  const auto g1 = green_column(spec, n1, n2, n1, pair.E);
  const auto g2 = green_column(spec, n1, n2, n2, pair.E);
  const double left = pair.psi[static_cast<std::size_t>(n1 - 1)];
  const double right = pair.psi[static_cast<std::size_t>(n2 + 1)];
  ExpansionCheck c;
  for (int m = n1; m <= n2; ++m) {
    const auto i = static_cast<std::size_t>(m - n1);
    const double v = pair.psi[static_cast<std::size_t>(m)] + g1[i] * left + g2[i] * right;
    c.max_residual = std::max(c.max_residual, std::fabs(v));
    c.max_green = std::max({c.max_green, std::fabs(g1[i]), std::fabs(g2[i])});
  }
  return c;
}

}  // namespace qploc
