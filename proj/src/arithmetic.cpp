#include "qploc/arithmetic.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "qploc/errors.hpp"
#include "qploc/numeric.hpp"

namespace qploc {

namespace {

constexpr Int128 kInt128Max = static_cast<Int128>((~static_cast<unsigned __int128>(0)) >> 1);

// Number of rule coefficients used when evaluating alpha and tails backward.
constexpr int kTailLookahead = 96;

Int128 checked_step(std::int64_t a, Int128 prev, Int128 prev2) {
  if (prev != 0 && static_cast<Int128>(a) > (kInt128Max - prev2) / prev) {
    throw CapacityError("continued fraction convergent exceeds 128-bit capacity");
  }
  return static_cast<Int128>(a) * prev + prev2;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    const std::string token = item.substr(first, last - first + 1);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (errno != 0 || end == token.c_str() || *end != '\0' || v <= 0) {
      throw PreconditionError("frequency: coefficient '" + token + "' is not a positive integer");
    }
    out.push_back(v);
  }
  return out;
}

std::string join(const std::vector<std::int64_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(values[i]);
  }
  return s;
}

}  // namespace

std::string to_string(Int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
                                   : static_cast<unsigned __int128>(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

// ---------------------------------------------------------------------------
// Frequency

Frequency Frequency::golden() {
  Frequency f = from_rule({}, {1});
  f.value_ = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  f.label_ = "golden";
  return f;
}

Frequency Frequency::silver() {
  Frequency f = from_rule({}, {2});
  f.value_ = std::sqrt(2.0L) - 1.0L;
  f.label_ = "silver";
  return f;
}

Frequency Frequency::from_rule(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period) {
  if (period.empty()) throw PreconditionError("frequency: coefficient rule needs a non-empty period");
  for (auto a : prefix)
    if (a <= 0) throw PreconditionError("frequency: coefficients must be positive");
  for (auto a : period)
    if (a <= 0) throw PreconditionError("frequency: coefficients must be positive");
  Frequency f;
  f.prefix_ = std::move(prefix);
  f.period_ = std::move(period);
  const int depth = static_cast<int>(f.prefix_.size()) + kTailLookahead;
  long double x = 0.0L;
  for (int k = depth; k >= 1; --k) x = 1.0L / (static_cast<long double>(f.coefficient(k)) + x);
  f.value_ = x;
  f.label_ = f.prefix_.empty() ? "cf:[" + join(f.period_) + "]"
                               : "cf:[" + join(f.prefix_) + ";" + join(f.period_) + "]";
  return f;
}

Frequency Frequency::numeric(long double value) {
  if (!(value > 0.0L && value < 1.0L)) throw PreconditionError("frequency: alpha must lie in (0, 1)");
  Frequency f;
  f.value_ = value;
  std::ostringstream os;
  os.precision(21);
  os << "num:" << value;
  f.label_ = os.str();
  return f;
}

Frequency Frequency::parse(std::string_view text) {
  if (text == "golden") return golden();
  if (text == "silver") return silver();
  if (text.starts_with("cf:[") && text.ends_with("]")) {
    const std::string_view body = text.substr(4, text.size() - 5);
    const auto semi = body.find(';');
    if (semi == std::string_view::npos) return from_rule({}, parse_int_list(body));
    return from_rule(parse_int_list(body.substr(0, semi)), parse_int_list(body.substr(semi + 1)));
  }
  if (text.starts_with("num:")) {
    const std::string s(text.substr(4));
    char* end = nullptr;
    errno = 0;
    const long double v = std::strtold(s.c_str(), &end);
    if (errno != 0 || end == s.c_str() || *end != '\0') {
      throw PreconditionError("frequency: cannot parse number '" + s + "'");
    }
    return numeric(v);
  }
  throw PreconditionError("frequency: unknown frequency '" + std::string(text) +
                          "' (expected golden, silver, cf:[...] or num:<decimal>)");
}

std::int64_t Frequency::coefficient(int k) const {
  if (!has_rule()) throw PreconditionError("frequency: numeric alpha has no coefficient rule");
  if (k < 1) throw PreconditionError("frequency: coefficient index starts at 1");
  const auto idx = static_cast<std::size_t>(k - 1);
  if (idx < prefix_.size()) return prefix_[idx];
  return period_[(idx - prefix_.size()) % period_.size()];
}

// ---------------------------------------------------------------------------
// ContinuedFraction

ContinuedFraction ContinuedFraction::expand(long double alpha, int depth) {
  if (depth < 1) throw PreconditionError("cf_expand: depth must be >= 1");
  if (!(alpha > 0.0L && alpha < 1.0L)) throw PreconditionError("cf_expand: alpha must lie in (0, 1)");
  ContinuedFraction cf;
  cf.alpha_ = alpha;
  long double y = alpha;  // y_0
  for (int k = 1; k <= depth + 1; ++k) {
    if (y < 1e-14L) {
      throw PrecisionError("cf_expand: alpha is rational at working precision (remainder " +
                           std::to_string(static_cast<double>(y)) + " at step " +
                           std::to_string(k - 1) + "); supply a coefficient rule instead");
    }
    const long double t = 1.0L / y;  // t_k
    cf.tails_.push_back(t);
    if (k == depth + 1) break;
    const long double a = std::floor(t);
    if (a > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
      throw CapacityError("cf_expand: coefficient exceeds 64-bit range");
    }
    cf.coeffs_.push_back(static_cast<std::int64_t>(a));
    y = t - a;
  }
  cf.build_convergents();
  return cf;
}

ContinuedFraction ContinuedFraction::of(const Frequency& frequency, int depth) {
  if (!frequency.has_rule()) return expand(frequency.value(), depth);
  if (depth < 1) throw PreconditionError("cf_expand: depth must be >= 1");
  ContinuedFraction cf;
  cf.alpha_ = frequency.value();
  for (int k = 1; k <= depth; ++k) cf.coeffs_.push_back(frequency.coefficient(k));
  for (int k = 1; k <= depth + 1; ++k) {
    long double tail = 0.0L;
    for (int j = k + kTailLookahead; j > k; --j) {
      tail = 1.0L / (static_cast<long double>(frequency.coefficient(j)) + tail);
    }
    cf.tails_.push_back(static_cast<long double>(frequency.coefficient(k)) + tail);
  }
  cf.build_convergents();
  return cf;
}

void ContinuedFraction::build_convergents() {
  p_.assign(1, 0);  // p_0 = a_0 = 0
  q_.assign(1, 1);  // q_0 = 1
  Int128 p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  for (std::int64_t a : coeffs_) {
    const Int128 p_next = checked_step(a, p_.back(), p_prev);
    const Int128 q_next = checked_step(a, q_.back(), q_prev);
    p_prev = p_.back();
    q_prev = q_.back();
    p_.push_back(p_next);
    q_.push_back(q_next);
  }
}

std::int64_t ContinuedFraction::a(int k) const {
  if (k < 1 || k > depth()) throw PreconditionError("continued fraction: coefficient index out of range");
  return coeffs_[static_cast<std::size_t>(k - 1)];
}

Int128 ContinuedFraction::p(int k) const {
  if (k < 0 || k > depth()) throw PreconditionError("continued fraction: convergent index out of range");
  return p_[static_cast<std::size_t>(k)];
}

Int128 ContinuedFraction::q(int k) const {
  if (k < 0 || k > depth()) throw PreconditionError("continued fraction: convergent index out of range");
  return q_[static_cast<std::size_t>(k)];
}

std::int64_t ContinuedFraction::q64(int k) const {
  const Int128 v = q(k);
  if (v > static_cast<Int128>(std::numeric_limits<std::int64_t>::max())) {
    throw CapacityError("continued fraction: q_" + std::to_string(k) + " exceeds 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

long double ContinuedFraction::tail(int k) const {
  if (k < 1 || k > depth() + 1) throw PreconditionError("continued fraction: tail index out of range");
  return tails_[static_cast<std::size_t>(k - 1)];
}

long double ContinuedFraction::convergent_error(int k) const {
  return static_cast<long double>(q(k)) * alpha_ - static_cast<long double>(p(k));
}

std::vector<std::int64_t> ContinuedFraction::denominators() const {
  std::vector<std::int64_t> out;
  for (int k = 0; k <= depth(); ++k) out.push_back(q64(k));
  return out;
}

// ---------------------------------------------------------------------------

double torus_norm(std::int64_t n, long double alpha) {
  return static_cast<double>(torus_distance(static_cast<long double>(n) * alpha));
}

GapStructure gap_structure(const ContinuedFraction& cf, int k) {
  if (k < 1 || k >= cf.depth()) throw PreconditionError("gap_structure: need 1 <= k < depth");
  GapStructure g;
  g.k = k;
  g.qk = cf.q64(k);
  const std::int64_t q_prev = cf.q64(k - 1);
  const long double alpha = cf.alpha();

  std::vector<long double> points(static_cast<std::size_t>(g.qk));
  for (std::int64_t j = 0; j < g.qk; ++j) points[static_cast<std::size_t>(j)] = frac(static_cast<long double>(j) * alpha);
  std::sort(points.begin(), points.end());
  g.gaps.resize(points.size());
  for (std::size_t i = 0; i + 1 < points.size(); ++i) g.gaps[i] = static_cast<double>(points[i + 1] - points[i]);
  g.gaps.back() = static_cast<double>(1.0L - points.back() + points.front());
  std::sort(g.gaps.begin(), g.gaps.end());
  g.total_length = pairwise_sum(g.gaps);

  // Cluster lengths with absolute tolerance 1e-12.
  struct Cluster {
    double len;
    std::int64_t count;
  };
  std::vector<Cluster> clusters;
  for (double gap : g.gaps) {
    if (!clusters.empty() && gap - clusters.back().len <= 1e-12) {
      ++clusters.back().count;
    } else {
      clusters.push_back({gap, 1});
    }
  }
  if (clusters.size() > 2) {
    throw PrecisionError("gap_structure: " + std::to_string(clusters.size()) +
                         " distinct gap lengths at k=" + std::to_string(k) + " (precision loss)");
  }

  g.predicted_small_len = static_cast<double>(std::fabs(cf.convergent_error(k - 1)));
  g.predicted_large_len = g.predicted_small_len + static_cast<double>(std::fabs(cf.convergent_error(k)));
  const std::int64_t expect_large = q_prev;
  const std::int64_t expect_small = g.qk - q_prev;

  if (g.qk == 1) {
    // A single orbit point leaves the whole circle as one gap.
    g.large_count = 1;
    g.large_len = g.gaps.front();
    g.small_count = 0;
    g.counts_match = std::fabs(g.large_len - 1.0) <= 1e-12;
    g.bounds_hold = true;
    return g;
  }

  if (clusters.size() == 2) {
    g.small_len = clusters[0].len;
    g.small_count = clusters[0].count;
    g.large_len = clusters[1].len;
    g.large_count = clusters[1].count;
  } else {
    g.large_len = clusters[0].len;
    g.large_count = clusters[0].count;
  }
  g.counts_match = g.large_count == expect_large && g.small_count == expect_small &&
                   std::fabs(g.large_len - g.predicted_large_len) <= 1e-12 &&
                   (expect_small == 0 || std::fabs(g.small_len - g.predicted_small_len) <= 1e-12);

  const double qk = static_cast<double>(g.qk);
  const double qk1 = static_cast<double>(cf.q64(k + 1));
  const double qkm = static_cast<double>(q_prev);
  constexpr double slack = 1e-12;
  bool ok = g.large_len >= 1.0 / qk - slack && g.large_len <= 1.0 / qk + 1.0 / qk1 + slack;
  if (g.small_count > 0) {
    ok = ok && g.small_len >= 1.0 / qk - qkm / (qk * qk1) - slack && g.small_len <= 1.0 / qk + slack;
  }
  g.bounds_hold = ok;
  return g;
}

ErEstimate er_estimate(const ContinuedFraction& cf) {
  if (cf.depth() < 4) throw PreconditionError("er_estimate: depth must be >= 4");
  ErEstimate e;
  e.min_ratio = 1.0;
  for (int k = 1; k < cf.depth(); ++k) {
    const double r = static_cast<double>(static_cast<long double>(cf.q(k - 1)) /
                                         static_cast<long double>(cf.q(k + 1)));
    e.ratios.push_back(r);
    if (r < e.min_ratio) {
      e.min_ratio = r;
      e.argmin_k = k;
    }
  }
  e.tail_ratio = e.ratios.back();
  return e;
}

std::vector<GoodDenominator> good_denominators(const ContinuedFraction& cf, double er) {
  if (!(er > 0.0 && er < 1.0)) throw PreconditionError("good_denominators: need 0 < er < 1");
  std::vector<GoodDenominator> out;
  for (int k = 1; k < cf.depth(); ++k) {
    const double r = static_cast<double>(static_cast<long double>(cf.q(k - 1)) /
                                         static_cast<long double>(cf.q(k + 1)));
    if (r <= er) out.push_back({k, cf.q64(k), r, std::fabs(r - er) <= 1e-15});
  }
  return out;
}

DiophantineReport diophantine_check(const ContinuedFraction& cf, const DiophantineParams& params) {
  if (!(params.C > 0.0)) throw PreconditionError("diophantine_check: C must be > 0");
  if (params.tau < 1.0) throw PreconditionError("diophantine_check: tau must be >= 1");
  if (params.horizon < 1) throw PreconditionError("diophantine_check: horizon must be >= 1");
  if (static_cast<Int128>(params.horizon) > cf.q(cf.depth())) {
    throw PreconditionError("diophantine_check: horizon exceeds the deepest convergent denominator");
  }
  DiophantineReport r;
  r.worst_ratio = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 1; n <= params.horizon; ++n) {
    const double ratio = torus_norm(n, cf.alpha()) * std::pow(static_cast<double>(n), params.tau);
    if (ratio < r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_n = n;
    }
  }
  r.holds = r.worst_ratio >= params.C;
  return r;
}

std::vector<Breakpoint> beta_points(int n, long double alpha) {
  if (n < 1) throw PreconditionError("beta_points: n must be >= 1");
  std::vector<Breakpoint> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)] = {static_cast<double>(frac(-static_cast<long double>(j) * alpha)), j};
  }
  std::sort(out.begin(), out.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.beta < b.beta; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].beta - out[i - 1].beta <= 1e-15) {
      throw PrecisionError("beta_points: coincident breakpoints (alpha rational at working precision)");
    }
  }
  return out;
}

bool indifference_admissible(double x, int k, const ContinuedFraction& cf) {
  const long double fx = frac(static_cast<long double>(x));
  const long double w = 1.0L / static_cast<long double>(cf.q(k + 1));
  if (k % 2 == 0) return !(fx > 1.0L - w);
  return !(fx < w);
}

IndifferenceResult indifference_check(double x, int k, const ContinuedFraction& cf) {
  if (k < 0 || k >= cf.depth()) throw PreconditionError("indifference_check: need 0 <= k < depth");
  IndifferenceResult r;
  r.admissible = indifference_admissible(x, k, cf);
  if (!r.admissible) return r;
  const long double fx = frac(static_cast<long double>(x));
  const long double shifted = frac(static_cast<long double>(x) + static_cast<long double>(cf.q(k)) * cf.alpha());
  r.difference = static_cast<double>(std::fabs(shifted - fx));
  r.holds = r.difference <= 1.0 / static_cast<double>(cf.q(k + 1)) + 1e-15;
  return r;
}

}  // namespace qploc
