#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qploc/arithmetic.hpp"
#include "qploc/errors.hpp"

using namespace qploc;

namespace {

// Brute-force gaps of {j alpha}, j < n, in long double.
std::vector<long double> brute_gaps(long double alpha, std::int64_t n) {
  std::vector<long double> pts;
  for (std::int64_t j = 0; j < n; ++j) {
    long double y = j * alpha;
    pts.push_back(y - std::floor(y));
  }
  std::sort(pts.begin(), pts.end());
  std::vector<long double> gaps;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) gaps.push_back(pts[i + 1] - pts[i]);
  gaps.push_back(1.0L - pts.back() + pts.front());
  return gaps;
}

}  // namespace

TEST_CASE("golden denominators are Fibonacci numbers") {
  const auto cf = ContinuedFraction::of(Frequency::golden(), 40);
  std::int64_t a = 1, b = 1;  // q_0, q_1
  CHECK(cf.q(0) == 1);
  CHECK(cf.q(1) == 1);
  for (int k = 2; k <= 40; ++k) {
    const std::int64_t c = a + b;
    a = b;
    b = c;
    CHECK(cf.q64(k) == c);
    CHECK(cf.p(k) == cf.q(k - 1));
  }
  CHECK(cf.q64(6) == 13);
  CHECK(cf.q64(8) == 34);
  CHECK(cf.q64(10) == 89);
}

TEST_CASE("silver denominators follow q = 2 q' + q''") {
  const auto cf = ContinuedFraction::of(Frequency::silver(), 12);
  const std::int64_t expected[] = {1, 2, 5, 12, 29, 70, 169};
  for (int k = 0; k < 7; ++k) CHECK(cf.q64(k) == expected[k]);
  CHECK(static_cast<double>(cf.alpha()) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("periodic rule matches the quadratic irrational it defines") {
  // [0; 1, 2, 1, 2, ...] solves a^2 + 2a - 2 = 0.
  const auto f = Frequency::parse("cf:[1,2]");
  CHECK(static_cast<double>(f.value()) == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-15));
  CHECK(Frequency::parse(f.label()).value() == f.value());
}

TEST_CASE("convergent errors alternate and are bounded by 1/q_{k+1}") {
  const auto cf = ContinuedFraction::of(Frequency::golden(), 30);
  for (int k = 1; k < 29; ++k) {
    const long double e = cf.convergent_error(k);
    const long double e_next = cf.convergent_error(k + 1);
    CHECK(e * e_next < 0);
    CHECK(std::fabs(static_cast<double>(e)) < 1.0 / static_cast<double>(cf.q64(k + 1)));
  }
}

TEST_CASE("numeric expansion recovers the rule coefficients") {
  const auto cf = ContinuedFraction::expand(std::sqrt(2.0L) - 1.0L, 12);
  for (int k = 1; k <= 12; ++k) CHECK(cf.a(k) == 2);
  CHECK_THROWS_AS(ContinuedFraction::expand(0.375L, 10), PrecisionError);
}

TEST_CASE("torus norm agrees with a direct nearest-integer distance") {
  const long double alpha = Frequency::golden().value();
  for (std::int64_t n = 1; n < 200; ++n) {
    const long double y = n * alpha;
    const double direct = static_cast<double>(std::fabs(y - std::round(y)));
    CHECK(torus_norm(n, alpha) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("gap structure matches brute-force sorted orbit") {
  for (auto freq : {Frequency::golden(), Frequency::silver(), Frequency::parse("cf:[1,3,2]")}) {
    const auto cf = ContinuedFraction::of(freq, 20);
    for (int k = 2; k < 14; ++k) {
      const auto g = gap_structure(cf, k);
      auto gaps = brute_gaps(cf.alpha(), g.qk);
      const long double lo = *std::min_element(gaps.begin(), gaps.end());
      const long double hi = *std::max_element(gaps.begin(), gaps.end());
      const auto n_hi = std::count_if(gaps.begin(), gaps.end(), [&](long double v) { return hi - v < 1e-12; });
      CHECK(g.large_len == doctest::Approx(static_cast<double>(hi)).epsilon(1e-12));
      CHECK(g.large_count == n_hi);
      if (g.small_count > 0) CHECK(g.small_len == doctest::Approx(static_cast<double>(lo)).epsilon(1e-12));
      CHECK(g.large_count + g.small_count == g.qk);
      CHECK(g.counts_match);
      CHECK(g.bounds_hold);
      CHECK(g.total_length == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("golden er estimate tends to 1/phi^2") {
  const auto cf = ContinuedFraction::of(Frequency::golden(), 30);
  const auto er = er_estimate(cf);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(er.tail_ratio == doctest::Approx(1.0 / (phi * phi)).epsilon(1e-9));
  CHECK(er.ratios.front() == doctest::Approx(0.5));
}

TEST_CASE("good denominators are exactly the scales passing the ratio test") {
  const auto cf = ContinuedFraction::of(Frequency::golden(), 20);
  const auto good = good_denominators(cf, 0.4);
  std::vector<std::int64_t> expected;
  for (int k = 1; k < 20; ++k) {
    if (static_cast<double>(cf.q64(k - 1)) / static_cast<double>(cf.q64(k + 1)) <= 0.4) expected.push_back(cf.q64(k));
  }
  REQUIRE(good.size() == expected.size());
  for (std::size_t i = 0; i < good.size(); ++i) CHECK(good[i].q == expected[i]);
  CHECK(good.front().q == 2);  // k = 2: q_1 / q_3 = 1/3
}

TEST_CASE("diophantine check finds the brute-force minimum") {
  const auto cf = ContinuedFraction::of(Frequency::golden(), 30);
  double worst = 1e9;
  for (std::int64_t n = 1; n <= 1000; ++n) {
    const long double y = n * cf.alpha();
    worst = std::min(worst, static_cast<double>(std::fabs(y - std::round(y))) * static_cast<double>(n));
  }
  const auto r = diophantine_check(cf, {0.3, 1.0, 1000});
  CHECK(r.holds);
  CHECK(r.worst_ratio == doctest::Approx(worst).epsilon(1e-12));
  CHECK_FALSE(diophantine_check(cf, {0.5, 1.0, 1000}).holds);
  CHECK_THROWS_AS(diophantine_check(cf, {0.0, 1.0, 10}), PreconditionError);
}

TEST_CASE("breakpoints are the sorted phases -j alpha") {
  const long double alpha = Frequency::golden().value();
  const auto b = beta_points(34, alpha);
  REQUIRE(b.size() == 34);
  CHECK(b.front().beta == 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const long double y = -static_cast<long double>(b[i].site) * alpha;
    CHECK(b[i].beta == doctest::Approx(static_cast<double>(y - std::floor(y))).epsilon(1e-15));
    if (i > 0) CHECK(b[i].beta > b[i - 1].beta);
  }
}

TEST_CASE("indifference holds at admissible phases") {
  const auto cf = ContinuedFraction::of(Frequency::golden(), 20);
  for (int k = 2; k < 12; ++k) {
    for (int i = 0; i < 200; ++i) {
      const double x = (i + 0.5) / 200.0;
      const auto r = indifference_check(x, k, cf);
      if (r.admissible) CHECK(r.holds);
    }
  }
}
