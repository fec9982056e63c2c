#include <doctest.h>

#include <cmath>

#include "qploc/cocycle.hpp"
#include "qploc/errors.hpp"
#include "qploc/ldt.hpp"
#include "qploc/spectral.hpp"

using namespace qploc;

TEST_CASE("deviation set measure equals a direct grid count") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const double E = 5.0;
  const double gamma = lyapunov_finite(spec, 10000, E).gamma;
  const double delta = 0.3 * gamma;
  const int q = 13;
  const int grid = 4000;
  const auto d = deviation_set(spec, q, E, delta, gamma, grid);
  int below = 0;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    below += char_det(spec.with_phase(x), 0, q, E).log_abs() < q * (gamma - delta);
  }
  CHECK(d.measure == doctest::Approx(static_cast<double>(below) / grid));
  CHECK(d.intervals <= q);
  CHECK(d.threshold == doctest::Approx(q * (gamma - delta)));
  CHECK_THROWS_AS(deviation_set(spec, q, E, gamma, gamma, grid), PreconditionError);
}

TEST_CASE("deviation measure shrinks across scales") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const double E = 3.0;
  const double gamma = lyapunov_finite(spec, 10000, E).gamma;
  const auto a = deviation_set(spec, 13, E, 0.3 * gamma, gamma, 20000);
  const auto b = deviation_set(spec, 34, E, 0.3 * gamma, gamma, 20000);
  CHECK(b.measure < a.measure);
  CHECK(b.refined_measure < a.refined_measure);
}

TEST_CASE("cluster split reproduces ln|P_q|") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  for (double x : {0.1, 0.45, 0.8}) {
    const auto c = cluster_split(spec, 34, x, 5.0);
    CHECK(c.identity_error < 1e-9);
    CHECK(c.above.size() + c.around.size() + c.below.size() == 34);
    const double direct = char_det(spec.with_phase(x), 0, 34, 5.0).log_abs();
    CHECK(c.log_total == doctest::Approx(direct).epsilon(1e-12));
    for (double mu : c.above) CHECK(mu > 5.0);
    for (double mu : c.below) CHECK(mu < 5.0);
  }
}

TEST_CASE("log stability is a small multiple of ln q") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const auto pairs = stability_pairs(34, spec.alpha(), 20);
  CHECK(pairs.size() == 20);
  const auto r = log_stability(spec, 34, pairs, 5.0);
  CHECK(r.pairs == 20);
  CHECK(r.ratio == doctest::Approx(r.max_deviation / std::log(34.0)));
  CHECK(r.ratio < 5.0);
}

TEST_CASE("zeros of P_q match jumps of the counting function") {
  OperatorSpec spec;
  spec.lambda = 2.0;
  for (int q : {13, 34}) {
    const auto z = zero_count(spec, q, 1.0, 40000);
    CHECK(z.equal);
    CHECK(z.poly_zeros == z.counting_jumps);
  }
}
