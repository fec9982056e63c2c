#include <doctest.h>

#include <cmath>
#include <random>

#include "qploc/scaled.hpp"

using namespace qploc;

TEST_CASE("scaled values reproduce double arithmetic") {
  std::mt19937_64 g(3);
  for (int i = 0; i < 200; ++i) {
    const double a = (static_cast<double>(g() >> 11) * 0x1p-53 - 0.5) * std::ldexp(1.0, static_cast<int>(g() % 60) - 30);
    const double b = (static_cast<double>(g() >> 11) * 0x1p-53 - 0.5) * std::ldexp(1.0, static_cast<int>(g() % 60) - 30);
    const ScaledValue sa(a), sb(b);
    CHECK((sa * sb).to_double() == doctest::Approx(a * b).epsilon(1e-15));
    CHECK((sa / sb).to_double() == doctest::Approx(a / b).epsilon(1e-15));
    CHECK((sa + sb).to_double() == doctest::Approx(a + b).epsilon(1e-12).scale(std::fabs(a) + std::fabs(b)));
    CHECK((sa - sb).to_double() == doctest::Approx(a - b).epsilon(1e-12).scale(std::fabs(a) + std::fabs(b)));
    CHECK(sa.log_abs() == doctest::Approx(std::log(std::fabs(a))).epsilon(1e-14));
  }
}

TEST_CASE("scaled values survive far beyond the double range") {
  ScaledValue v(3.0);
  for (int i = 0; i < 2000; ++i) v = v * ScaledValue(1e10);
  CHECK(v.log_abs() == doctest::Approx(std::log(3.0) + 20000 * std::log(10.0)).epsilon(1e-13));
  CHECK(std::isinf(v.to_double()));
  ScaledValue w = v / v;
  CHECK(w.to_double() == doctest::Approx(1.0));
  CHECK(relative_difference(v, v * ScaledValue(1.0 + 1e-12)) == doctest::Approx(1e-12).epsilon(1e-3));
  CHECK(relative_difference(ScaledValue(0.0), ScaledValue(0.0)) == 0.0);
}

TEST_CASE("matrix steps match a direct long double product") {
  std::mt19937_64 g(4);
  ScaledMatrix m;
  long double a = 1, b = 0, c = 0, d = 1;
  for (int i = 0; i < 60; ++i) {
    const double t = 4.0 * (static_cast<double>(g() >> 11) * 0x1p-53) - 2.0;
    m.step(t);
    const long double na = t * a - c, nb = t * b - d;
    c = a;
    d = b;
    a = na;
    b = nb;
  }
  CHECK(m.entry(0, 0).to_double() == doctest::Approx(static_cast<double>(a)).epsilon(1e-10));
  CHECK(m.entry(0, 1).to_double() == doctest::Approx(static_cast<double>(b)).epsilon(1e-10));
  CHECK(m.entry(1, 0).to_double() == doctest::Approx(static_cast<double>(c)).epsilon(1e-10));
  CHECK(m.entry(1, 1).to_double() == doctest::Approx(static_cast<double>(d)).epsilon(1e-10));
  // det = 1 only survives relative to ||M||^2; the plain determinant of a
  // hyperbolic product cancels.
  const double dm = m.mantissa(0, 0) * m.mantissa(1, 1) - m.mantissa(0, 1) * m.mantissa(1, 0);
  CHECK(std::fabs(dm - std::ldexp(1.0, static_cast<int>(-2 * m.exponent2()))) < 1e-14);

  // Largest singular value by power iteration on M^T M.
  long double x = 1, y = 0.3;
  for (int it = 0; it < 500; ++it) {
    const long double u = a * x + b * y, v = c * x + d * y;
    const long double nx = a * u + c * v, ny = b * u + d * v;
    const long double norm = std::sqrt(nx * nx + ny * ny);
    x = nx / norm;
    y = ny / norm;
  }
  const long double u = a * x + b * y, v = c * x + d * y;
  const double sigma = static_cast<double>(std::sqrt(u * u + v * v));
  CHECK(m.log_spectral_norm() == doctest::Approx(std::log(sigma)).epsilon(1e-12));
}
