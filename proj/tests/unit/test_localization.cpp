#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle/dense.hpp"
#include "qploc/errors.hpp"
#include "qploc/localization.hpp"
#include "qploc/restriction.hpp"
#include "qploc/spectral.hpp"

using namespace qploc;

namespace {

double uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

EigenPair synthetic(int n, int n0, double rate) {
  EigenPair p;
  p.n = n;
  p.n0 = n0;
  for (int i = 0; i < n; ++i) {
    p.log_abs.push_back(-rate * std::abs(i - n0));
    p.psi.push_back(std::exp(p.log_abs.back()));
  }
  return p;
}

}  // namespace

TEST_CASE("Green's function elements match the dense inverse") {
  std::mt19937_64 g(31);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    OperatorSpec spec;
    spec.lambda = 10.0 * uniform(g);
    spec.phase = uniform(g);
    const long long a = static_cast<long long>(g() % 40) - 20;
    const int N = 1 + static_cast<int>(g() % 40);
    const long long b = a + N - 1;
    const double E = -2.0 + (spec.lambda + 4.0) * uniform(g);
    const auto h = build(spec, N, Boundary::Dirichlet, false, a);
    const auto inv = oracle::shifted_inverse(h.dense(), N, E);
    const long long m = a + static_cast<long long>(g() % N);
    const long long k = a + static_cast<long long>(g() % N);
    const double ref = inv[static_cast<std::size_t>((m - a) * N + (k - a))];
    try {
      CHECK(green_element(spec, a, b, m, k, E) == doctest::Approx(ref).epsilon(1e-8));
      CHECK(relative_difference(green_quotient(spec, a, b, m, k, E), ScaledValue(ref)) < 1e-8);
      const auto col = green_column(spec, a, b, k, E);
      CHECK(col[static_cast<std::size_t>(m - a)] == doctest::Approx(ref).epsilon(1e-8));
      ++compared;
    } catch (const ConditioningError&) {
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("energies on the box spectrum are refused") {
  OperatorSpec spec;
  spec.lambda = 3.0;
  const auto s = dirichlet_spectrum(build(spec, 10, Boundary::Dirichlet), 1e-13);
  CHECK_THROWS_AS(green_element(spec, 0, 9, 2, 5, s.eigenvalues[4]), ConditioningError);
}

TEST_CASE("regular windows show the claimed decay") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const double E = 5.0;
  const int q = 34;
  const double mu = 0.5;
  int regular = 0;
  for (long long m = 100; m <= 140; ++m) {
    const auto r = regularity_test(spec, m, mu, q, E);
    if (!r.regular) continue;
    ++regular;
    CHECK(r.n2 - r.n1 + 1 == q);
    CHECK(std::fabs(green_element(spec, r.n1, r.n2, r.n1, m, E)) < std::exp(-mu * static_cast<double>(m - r.n1)));
    CHECK(std::fabs(green_element(spec, r.n1, r.n2, m, r.n2, E)) < std::exp(-mu * static_cast<double>(r.n2 - m)));
  }
  CHECK(regular > 20);
  const auto sep = singular_separation(spec, q, E, 0.3, 0.8, 100, 140);
  CHECK(sep.mu == doctest::Approx(0.5));
  CHECK(static_cast<int>(sep.singular.size()) == 41 - regular);
}

TEST_CASE("box eigenpairs agree with dense eigenvectors") {
  OperatorSpec spec;
  spec.lambda = 4.0;
  spec.phase = 0.21;
  const int n = 50;
  const auto dense = build(spec, n, Boundary::Dirichlet).dense();
  const auto vals = oracle::symmetric_eigenvalues(dense, n);
  const auto vecs = oracle::symmetric_eigenvectors(dense, n);
  const auto pairs = box_eigenpairs_by_index(spec, n, 0, n);
  REQUIRE(pairs.size() == static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& p = pairs[static_cast<std::size_t>(j)];
    CHECK(p.E == doctest::Approx(vals[static_cast<std::size_t>(j)]).epsilon(1e-12));
    CHECK(p.residual < 1e-10);
    double dot = 0, norm = 0;
    for (int i = 0; i < n; ++i) {
      dot += p.psi[static_cast<std::size_t>(i)] * vecs[static_cast<std::size_t>(i * n + j)];
      norm += p.psi[static_cast<std::size_t>(i)] * p.psi[static_cast<std::size_t>(i)];
    }
    CHECK(std::fabs(dot) / std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::fabs(p.psi[static_cast<std::size_t>(p.n0)]) == 1.0);
  }
  const auto window = box_eigenpairs(spec, n, 1.0, 3.0);
  for (const auto& p : window) CHECK((p.E >= 1.0 && p.E <= 3.0));
}

TEST_CASE("decay fits on synthetic profiles") {
  const auto loc = decay_fit(synthetic(400, 200, 0.7), 0.8, 0.15);
  CHECK(loc.rate == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(loc.r2 == doctest::Approx(1.0));
  CHECK(loc.verdict == Verdict::Localized);
  CHECK(decay_fit(synthetic(400, 200, 0.3), 0.8, 0.15).verdict == Verdict::Extended);
  CHECK(decay_fit(synthetic(400, 50, 0.7), 0.8, 0.15).verdict == Verdict::Inconclusive);
}

TEST_CASE("eigenvectors are rebuilt from their values outside a window") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const int n = 300;
  const auto pairs = box_eigenpairs_by_index(spec, n, 140, 150);
  int checked = 0;
  for (const auto& p : pairs) {
    for (int n1 : {20, 120, 200}) {
      try {
        const auto c = expansion_reconstruction(spec, p, n1, n1 + 40);
        INFO("E = ", p.E, ", n1 = ", n1, ", max |G| = ", c.max_green, ", residual = ", p.residual);
        CHECK(c.max_residual < 1e-6);
        ++checked;
      } catch (const ConditioningError&) {
      }
    }
  }
  CHECK(checked > 20);
}
