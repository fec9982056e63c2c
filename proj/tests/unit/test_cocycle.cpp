#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle/dense.hpp"
#include "qploc/cocycle.hpp"
#include "qploc/parallel.hpp"
#include "qploc/restriction.hpp"

using namespace qploc;

namespace {

double uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

// Free-chain IDS: N(E) = 1 - arccos(E/2)/pi on [-2, 2].
IdsTable free_ids(double dE) {
  IdsTable t;
  for (double E = -3.0; E <= 3.0 + 1e-12; E += dE) {
    t.E.push_back(E);
    t.N.push_back(E <= -2 ? 0.0 : (E >= 2 ? 1.0 : 1.0 - std::acos(E / 2) / M_PI));
  }
  t.n = 1000000;
  t.samples = 1;
  return t;
}

}  // namespace

TEST_CASE("characteristic polynomials match dense determinants") {
  std::mt19937_64 g(21);
  for (int trial = 0; trial < 50; ++trial) {
    OperatorSpec spec;
    spec.lambda = 6.0 * uniform(g);
    spec.phase = uniform(g);
    const int n = 1 + static_cast<int>(g() % 40);
    const double E = -2.0 + (spec.lambda + 4.0) * uniform(g);
    const auto seq = det_sequence(spec, n, E);
    REQUIRE(seq.size() == static_cast<std::size_t>(n + 1));
    CHECK(seq[0].to_double() == 1.0);
    for (int j = 1; j <= n; ++j) {
      const auto h = build(spec, j, Boundary::Dirichlet);
      const double ref = oracle::shifted_determinant(h.dense(), j, E);
      CHECK(relative_difference(seq[static_cast<std::size_t>(j)], ScaledValue(ref)) < 1e-9);
    }
    if (n >= 3) {
      const auto h = build(spec, n, Boundary::Periodic);
      const double ref = oracle::shifted_determinant(h.dense(), n, E);
      const auto w = periodic_det(spec, n, E);
      if (!w.cancellation) CHECK(relative_difference(w.value, ScaledValue(ref)) < 1e-9);
    }
  }
}

TEST_CASE("transfer matrices carry the box determinants") {
  std::mt19937_64 g(22);
  OperatorSpec spec;
  spec.lambda = 10.0;
  for (int n : {1, 2, 3, 10, 100, 1000}) {
    spec.phase = uniform(g);
    const auto r = transfer_identity(spec, n, 2.0 + 6.0 * uniform(g));
    CHECK(r.max_entry_error < 1e-10);
    CHECK(r.det_error < 1e-12);
  }
}

TEST_CASE("free chain Lyapunov exponent") {
  OperatorSpec spec;
  spec.lambda = 0.0;
  const auto at3 = lyapunov_finite(spec, 10000, 3.0);
  CHECK(at3.gamma == doctest::Approx(std::acosh(1.5)).epsilon(1e-3));
  CHECK(lyapunov_finite(spec, 10000, 0.0).gamma < 1e-3);
  LyapunovSampling grid;
  grid.mode = Sampling::Grid;
  grid.samples = 4;
  CHECK(lyapunov_finite(spec, 10000, 3.0, grid).gamma == doctest::Approx(at3.gamma).epsilon(1e-12));
}

TEST_CASE("Lyapunov curves do not depend on the worker count") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const std::vector<double> energies{2.5, 4.0, 5.5, 7.0, 7.5};
  set_thread_count(1);
  const auto a = lyapunov_curve(spec, 2000, energies);
  set_thread_count(4);
  const auto b = lyapunov_curve(spec, 2000, energies);
  set_thread_count(1);
  for (std::size_t i = 0; i < energies.size(); ++i) CHECK(a.gamma[i] == b.gamma[i]);
}

TEST_CASE("lower bound for large coupling") {
  CHECK(lyapunov_lower_bound(10.0, 1.0, 0.0) == doctest::Approx(std::log(10.0 / (2 * M_E))));
  CHECK(lyapunov_lower_bound(2.0, 1.0, 0.0) == 0.0);
  OperatorSpec spec;
  spec.lambda = 10.0;
  for (double E : {2.5, 5.0, 7.5}) CHECK(lyapunov_finite(spec, 10000, E).gamma >= lyapunov_lower_bound(10.0, 1.0, 0.0));
}

TEST_CASE("Thouless formula on the exact free IDS") {
  const auto t = free_ids(0.001);
  CHECK(thouless(t, 3.0).value == doctest::Approx(std::acosh(1.5)).epsilon(2e-3));
  CHECK(std::fabs(thouless(t, 0.0).value) < 2e-3);
  CHECK(std::fabs(thouless(t, 1.3).value) < 2e-3);
}

TEST_CASE("upper bound on ln|P_n| for the free chain") {
  OperatorSpec spec;
  spec.lambda = 0.0;
  const std::vector<int> ns{50, 100, 400};
  const std::vector<double> xs{0.0, 0.3, 0.6};
  const auto r = upper_bound_check(spec, ns, 3.0, 0.05, xs, std::acosh(1.5));
  for (const auto& row : r.rows) CHECK(row.violations == 0);
  CHECK(r.threshold_n == 50);
}

TEST_CASE("monotonicity form matches its closed form and is positive") {
  std::mt19937_64 g(23);
  for (auto pot : {MonotonePotential::sawtooth(), MonotonePotential::blend(0.5)}) {
    OperatorSpec spec;
    spec.lambda = 1.0;
    spec.potential = pot;
    int evaluated = 0;
    for (int i = 0; i < 200; ++i) {
      const auto f = monotonicity_form(spec, uniform(g), 1e-6, 4 * uniform(g) - 1, 2 * uniform(g) - 1,
                                       2 * uniform(g) - 1);
      if (f.skipped) continue;
      ++evaluated;
      CHECK(f.relative_error < 1e-4);
      CHECK(f.positive);
    }
    CHECK(evaluated > 150);
  }
}
