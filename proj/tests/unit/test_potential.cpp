#include <doctest.h>

#include <cmath>

#include "qploc/errors.hpp"
#include "qploc/potential.hpp"

using namespace qploc;

TEST_CASE("sawtooth is the identity on [0, 1)") {
  const auto v = MonotonePotential::sawtooth();
  for (double y : {0.0, 0.1, 0.5, 0.999}) CHECK(v.value(y) == y);
  CHECK(v.gamma_minus() == 1.0);
  CHECK(v.gamma_plus() == 1.0);
  CHECK(eval_periodic(v, 2.25) == doctest::Approx(0.25));
  CHECK(eval_periodic(v, -0.25) == doctest::Approx(0.75));
}

TEST_CASE("blend interpolates between linear and quadratic") {
  const auto v = MonotonePotential::parse("blend:0.5");
  for (double y : {0.0, 0.2, 0.7}) {
    CHECK(v.value(y) == doctest::Approx(0.5 * y + 0.5 * y * y));
    CHECK(v.derivative(y) == doctest::Approx(0.5 + y));
  }
  CHECK(v.gamma_minus() == doctest::Approx(0.5));
  CHECK(v.gamma_plus() == doctest::Approx(1.5));
  CHECK_THROWS_AS(MonotonePotential::blend(1.0), PreconditionError);
}

TEST_CASE("piecewise linear potential reports its kinks and slopes") {
  const auto v = MonotonePotential::parse("pwl:[(0,0),(0.5,0.25),(1,1)]");
  CHECK(v.value(0.25) == doctest::Approx(0.125));
  CHECK(v.value(0.75) == doctest::Approx(0.625));
  CHECK(v.gamma_minus() == doctest::Approx(0.5));
  CHECK(v.gamma_plus() == doctest::Approx(1.5));
  REQUIRE(v.kinks().size() == 1);
  CHECK(v.kinks()[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(MonotonePotential::parse("pwl:[(0,0),(0.5,0.6),(0.6,0.5),(1,1)]"), PreconditionError);
}

TEST_CASE("unknown potential names are rejected") {
  CHECK_THROWS_AS(MonotonePotential::parse("sawtoth"), PreconditionError);
}

TEST_CASE("validate_lipschitz accepts declared bounds and rejects false ones") {
  const auto r = validate_lipschitz(MonotonePotential::parse("blend:0.5"), 2000);
  CHECK(r.min_slope >= 0.5 - 1e-9);
  CHECK(r.max_slope <= 1.5 + 1e-9);
  const auto lying = MonotonePotential::custom(
      "lying", [](double y) { return y * y * y; }, [](double y) { return 3 * y * y; }, 0.5, 3.0);
  CHECK_THROWS_AS(validate_lipschitz(lying, 2000), ValidationError);
}

TEST_CASE("site values follow the orbit and the left-limit convention") {
  OperatorSpec spec;
  spec.lambda = 3.0;
  spec.phase = 0.2;
  const long double alpha = spec.alpha();
  for (long long m = -5; m < 20; ++m) {
    const long double y = 0.2L + m * alpha;
    CHECK(spec.site_value(m) == doctest::Approx(3.0 * static_cast<double>(y - std::floor(y))).epsilon(1e-14));
  }
  // x = {-3 alpha} puts site 3 on the discontinuity.
  const long double y = -3.0L * alpha;
  const OperatorSpec on = spec.with_phase(static_cast<double>(y - std::floor(y)));
  CHECK(on.site_value(3) == 0.0);
  CHECK(on.site_value(3, true) == 3.0);
  const auto orbit = sample_orbit(spec, 2, 6);
  REQUIRE(orbit.size() == 4);
  CHECK(orbit[1] == spec.site_value(3));
}
