#include "qploc/ldt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qploc/arithmetic.hpp"
#include "qploc/cocycle.hpp"
#include "qploc/errors.hpp"
#include "qploc/numeric.hpp"
#include "qploc/parallel.hpp"
#include "qploc/spectral.hpp"

namespace qploc {

namespace {

struct DetSample {
  double log_abs = 0.0;
  int sign = 0;
};

DetSample sample(const OperatorSpec& spec, int qk, double x, double E, bool left_limit = false) {
  const ScaledValue p = char_det(spec.with_phase(static_cast<double>(frac(x))), 0, qk, E, left_limit);
  return {p.log_abs(), p.sign()};
}

// Bisection for the switch point of pred on [a, b], pred(a) != pred(b).
template <typename Pred>
std::pair<double, double> bracket_switch(double a, double b, Pred&& pred) {
  const bool pa = pred(a);
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (pred(m) == pa) {
      a = m;
    } else {
      b = m;
    }
  }
  return {a, b};
}

double sum_logs(const std::vector<double>& nu, double E) {
  std::vector<double> terms;
  terms.reserve(nu.size());
  for (double v : nu) terms.push_back(std::log(std::fabs(v - E)));
  return pairwise_sum(terms);
}

double fit_c1(const std::vector<double>& above, const std::vector<double>& below, double E, int qk) {
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < above.size(); ++j) c = std::min(c, (above[j] - E) * qk / static_cast<double>(j + 1));
  for (std::size_t j = 0; j < below.size(); ++j) c = std::min(c, (E - below[j]) * qk / static_cast<double>(j + 1));
  return std::isfinite(c) ? c : 0.0;
}

// Splits sorted eigenvalues with the `window` nearest to E set aside.
void split(const std::vector<double>& mu, double E, int window, std::vector<double>& above,
           std::vector<double>& around, std::vector<double>& below) {
  above.clear();
  around.clear();
  below.clear();
  // Nearest eigenvalues form a contiguous index range around E.
  auto hi = static_cast<std::ptrdiff_t>(std::lower_bound(mu.begin(), mu.end(), E) - mu.begin());
  auto lo = hi - 1;
  const auto size = static_cast<std::ptrdiff_t>(mu.size());
  for (int w = 0; w < window && (lo >= 0 || hi < size); ++w) {
    const bool take_hi =
        lo < 0 || (hi < size && std::fabs(mu[static_cast<std::size_t>(hi)] - E) < std::fabs(E - mu[static_cast<std::size_t>(lo)]));
    if (take_hi) {
      ++hi;
    } else {
      --lo;
    }
  }
  for (std::ptrdiff_t i = lo; i >= 0; --i) below.push_back(mu[static_cast<std::size_t>(i)]);
  for (std::ptrdiff_t i = lo + 1; i < hi; ++i) around.push_back(mu[static_cast<std::size_t>(i)]);
  for (std::ptrdiff_t i = hi; i < size; ++i) above.push_back(mu[static_cast<std::size_t>(i)]);
}

}  // namespace

DeviationReport deviation_set(const OperatorSpec& spec, int qk, double E, double delta, double gamma,
                              int grid_size) {
  if (qk < 1) throw PreconditionError("deviation_set: q_k must be >= 1");
  if (!(delta > 0.0) || !(delta < gamma)) {
    throw PreconditionError("deviation_set: need 0 < delta < gamma (threshold would be vacuous)");
  }
  if (grid_size < 100 * qk) throw PreconditionError("deviation_set: grid must have at least 100 q_k points");
  DeviationReport r;
  r.qk = qk;
  r.E = E;
  r.delta = delta;
  r.gamma = gamma;
  r.threshold = qk * (gamma - delta);
  r.grid_size = grid_size;

  const auto G = static_cast<std::size_t>(grid_size);
  const double h = 1.0 / grid_size;
  std::vector<DetSample> values(G);
  parallel_for(G, [&](std::size_t i) { values[i] = sample(spec, qk, static_cast<double>(i) * h, E); });
  std::vector<char> below(G);
  std::size_t count = 0;
  for (std::size_t i = 0; i < G; ++i) {
    below[i] = values[i].log_abs < r.threshold;
    count += below[i];
  }
  r.measure = static_cast<double>(count) / grid_size;

  const auto is_below = [&](double x) { return sample(spec, qk, x, E).log_abs < r.threshold; };
  if (count == G) {
    r.intervals = 1;
    r.max_interval_length = 1.0;
    r.covering.emplace_back(0.0, 1.0);
    r.refined_measure = 1.0;
    return r;
  }

  // Runs of below-threshold grid points, walked circularly from an
  // above-threshold point.
  std::size_t start = 0;
  while (below[start]) ++start;
  std::vector<std::pair<double, double>> refined;
  for (std::size_t step = 1; step <= G;) {
    const std::size_t i = (start + step) % G;
    if (!below[i]) {
      ++step;
      continue;
    }
    std::size_t len = 0;
    while (step + len <= G && below[(start + step + len) % G]) ++len;
    const double a = static_cast<double>(start + step) * h;
    const double b = a + static_cast<double>(len) * h;
    r.covering.emplace_back(a >= 1.0 ? a - 1.0 : a, (a >= 1.0 ? a - 1.0 : a) + (b - a));
    const double left = bracket_switch(a - h, a, is_below).second;
    const double right = bracket_switch(b - h, b, is_below).first;
    refined.emplace_back(left, right);
    step += len;
  }
  // Deviation sets too thin for the grid: a sign change between two
  // above-threshold neighbours hides a root (or a jump through zero).
  for (std::size_t i = 0; i < G; ++i) {
    const std::size_t j = (i + 1) % G;
    if (below[i] || below[j]) continue;
    if (values[i].sign == 0 || values[j].sign == 0 || values[i].sign == values[j].sign) continue;
    const double a = static_cast<double>(i) * h;
    const double b = a + h;
    const int sa = values[i].sign;
    const auto [ra, rb] = bracket_switch(a, b, [&](double x) { return sample(spec, qk, x, E).sign == sa; });
    const double mid = 0.5 * (ra + rb);
    if (!is_below(ra) && !is_below(rb) && !is_below(mid)) continue;
    const double probe = is_below(mid) ? mid : (is_below(ra) ? ra : rb);
    const double left = bracket_switch(a, probe, is_below).second;
    const double right = bracket_switch(probe, b, is_below).first;
    refined.emplace_back(left, right);
  }
  std::vector<double> lengths;
  for (const auto& [a, b] : refined) lengths.push_back(std::max(0.0, b - a));
  r.refined_measure = pairwise_sum(lengths);

  r.intervals = static_cast<int>(r.covering.size());
  for (const auto& [a, b] : r.covering) r.max_interval_length = std::max(r.max_interval_length, b - a);
  return r;
}

ClusterSplit cluster_split(const OperatorSpec& spec, int qk, double x, double E, int window_c2, Boundary bc,
                           double tol) {
  if (qk < 1) throw PreconditionError("cluster_split: q_k must be >= 1");
  if (bc == Boundary::Periodic && qk < 3) throw PreconditionError("cluster_split: periodic split needs q_k >= 3");
  const OperatorSpec at = spec.with_phase(x);
  const auto s = compute_spectrum(build(at, qk, bc), tol);
  ClusterSplit c;
  c.qk = qk;
  c.x = x;
  c.E = E;
  c.bc = bc;
  if (window_c2 < 0) {
    split(s.eigenvalues, E, std::min(8, qk), c.above, c.around, c.below);
    const double saturated = fit_c1(c.above, c.below, E, qk);
    window_c2 = 0;
    for (double mu : s.eigenvalues) window_c2 += std::fabs(mu - E) < saturated / (2.0 * qk);
    window_c2 = std::min(window_c2, 8);
  }
  split(s.eigenvalues, E, window_c2, c.above, c.around, c.below);
  c.log_above = sum_logs(c.above, E);
  c.log_around = sum_logs(c.around, E);
  c.log_below = sum_logs(c.below, E);
  c.log_total = bc == Boundary::Dirichlet ? char_det(at, 0, qk, E).log_abs() : periodic_det(at, qk, E).value.log_abs();
  c.identity_error = std::fabs(c.log_above + c.log_around + c.log_below - c.log_total);
  c.fitted_c1 = fit_c1(c.above, c.below, E, qk);
  return c;
}

LogStabilityReport log_stability(const OperatorSpec& spec, int qk, std::span<const std::pair<double, double>> pairs,
                                 double E, int window_c2) {
  LogStabilityReport r;
  r.qk = qk;
  r.pairs = static_cast<int>(pairs.size());
  std::vector<double> dev(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    if (pairs[i].first == pairs[i].second) return;
    const auto a = cluster_split(spec, qk, pairs[i].first, E, window_c2);
    const auto b = cluster_split(spec, qk, pairs[i].second, E, window_c2);
    dev[i] = std::max(std::fabs(a.log_above - b.log_above), std::fabs(a.log_below - b.log_below));
  });
  for (double d : dev) r.max_deviation = std::max(r.max_deviation, d);
  r.ratio = qk > 1 ? r.max_deviation / std::log(static_cast<double>(qk)) : 0.0;
  return r;
}

std::vector<std::pair<double, double>> stability_pairs(int qk, long double alpha, int count) {
  const auto betas = beta_points(qk, alpha);
  const auto n = betas.size();
  const auto at = [&](std::size_t l) { return betas[l % n].beta; };
  const auto interior = [&](std::size_t l) {
    const double a = at(l);
    const double b = (l % n) + 1 < n ? at(l + 1) : 1.0;
    return 0.5 * (a + b);
  };
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    switch (i % 3) {
      case 0: out.emplace_back(at(7 * u), at(13 * u + 5)); break;
      case 1: out.emplace_back(at(3 * u + 1), interior(11 * u + 2)); break;
      default: out.emplace_back(interior(5 * u), interior(17 * u + 3)); break;
    }
  }
  return out;
}

ZeroCountReport zero_count(const OperatorSpec& spec, int qk, double E, int grid_size) {
  if (qk < 1) throw PreconditionError("zero_count: q_k must be >= 1");
  if (grid_size < 1) throw PreconditionError("zero_count: grid must be nonempty");
  const auto betas = beta_points(qk, spec.alpha());
  const auto L = betas.size();
  const double above_E = std::nextafter(E, std::numeric_limits<double>::infinity());
  std::vector<int> zeros(L, 0);
  std::vector<int> jumps(L, 0);
  parallel_for(L, [&](std::size_t l) {
    const double a = betas[l].beta;
    const double b = l + 1 < L ? betas[l + 1].beta : 1.0;
    std::vector<int> signs;
    signs.push_back(sample(spec, qk, a, E).sign);
    const auto first = static_cast<long>(std::floor(a * grid_size)) + 1;
    for (long i = first; static_cast<double>(i) / grid_size < b; ++i) {
      const double x = static_cast<double>(i) / grid_size;
      if (x <= a) continue;
      signs.push_back(sample(spec, qk, x, E).sign);
    }
    const double end = l + 1 < L ? b : 0.0;  // beta_0 - 0 is the left limit at 1
    signs.push_back(sample(spec, qk, end, E, true).sign);
    int prev = 0;
    for (int s : signs) {
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++zeros[l];
      prev = s;
    }
    const OperatorSpec at = spec.with_phase(a);
    const int right = count_below(build(at, qk, Boundary::Dirichlet, false), above_E);
    const int left = count_below(build(at, qk, Boundary::Dirichlet, true), above_E);
    jumps[l] = left < right ? 1 : 0;
  });
  ZeroCountReport r;
  for (std::size_t l = 0; l < L; ++l) {
    r.poly_zeros += zeros[l];
    r.counting_jumps += jumps[l];
  }
  r.equal = r.poly_zeros == r.counting_jumps;
  r.refine_suggested = !r.equal;
  return r;
}

}  // namespace qploc
