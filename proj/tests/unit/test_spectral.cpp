#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle/dense.hpp"
#include "qploc/spectral.hpp"

using namespace qploc;

namespace {

double uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

}  // namespace

TEST_CASE("Sturm counts agree with dense eigenvalues") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 40; ++trial) {
    OperatorSpec spec;
    spec.lambda = 8.0 * uniform(g);
    spec.phase = uniform(g);
    const int n = 1 + static_cast<int>(g() % 40);
    for (auto bc : {Boundary::Dirichlet, Boundary::Periodic}) {
      const auto h = build(spec, n, bc);
      const auto ev = oracle::symmetric_eigenvalues(h.dense(), n);
      for (int s = 0; s < 20; ++s) {
        const double E = -3.0 + (spec.lambda + 6.0) * uniform(g);
        const auto expected = std::count_if(ev.begin(), ev.end(), [&](double mu) { return mu < E; });
        CHECK(count_below(h, E) == expected);
      }
    }
  }
}

TEST_CASE("bisection spectra match the dense oracle") {
  std::mt19937_64 g(12);
  for (int trial = 0; trial < 30; ++trial) {
    OperatorSpec spec;
    spec.lambda = 10.0 * uniform(g);
    spec.phase = uniform(g);
    const int n = 1 + static_cast<int>(g() % 64);
    for (auto bc : {Boundary::Dirichlet, Boundary::Periodic}) {
      const auto h = build(spec, n, bc);
      const auto s = compute_spectrum(h, 1e-12);
      const auto ev = oracle::symmetric_eigenvalues(h.dense(), n);
      REQUIRE(s.eigenvalues.size() == ev.size());
      for (int i = 0; i < n; ++i) CHECK(std::fabs(s.eigenvalues[i] - ev[i]) < 1e-10);
      CHECK(spectrum_residual_ok(h, s));
    }
  }
}

TEST_CASE("free chain closed forms") {
  OperatorSpec spec;
  spec.lambda = 0.0;
  const int n = 200;
  const auto d = dirichlet_spectrum(build(spec, n, Boundary::Dirichlet));
  const auto p = periodic_spectrum(build(spec, n, Boundary::Periodic));
  std::vector<double> ed, ep;
  for (int j = 1; j <= n; ++j) ed.push_back(2 * std::cos(j * M_PI / (n + 1)));
  for (int j = 0; j < n; ++j) ep.push_back(2 * std::cos(2 * M_PI * j / n));
  std::sort(ed.begin(), ed.end());
  std::sort(ep.begin(), ep.end());
  for (int i = 0; i < n; ++i) {
    CHECK(std::fabs(d.eigenvalues[i] - ed[i]) < 1e-10);
    CHECK(std::fabs(p.eigenvalues[i] - ep[i]) < 1e-10);
  }
  CHECK(counting(p, 2.0 + 1e-9) == n);
  CHECK(counting(p, -2.5) == 0);
}

TEST_CASE("eigenvalue curves are monotone between breakpoints and interlace across them") {
  OperatorSpec spec;
  spec.lambda = 2.0;
  const int n = 13;
  const auto grid = curve_grid(n, spec.alpha(), 6);
  const auto set = eigencurves(spec, n, {}, grid);
  CHECK(set.curves.size() == static_cast<std::size_t>(n));
  const auto& r = set.report;
  CHECK(r.interlacing_violations == 0);
  CHECK(r.jump_sign_violations == 0);
  CHECK(r.slope_violations == 0);
  CHECK(r.min_slope >= r.slope_lower - 1e-6);
  CHECK(r.max_slope <= r.slope_upper + 1e-6);
  for (const auto& c : set.curves) CHECK(c.jumps.size() == static_cast<std::size_t>(n));
}

TEST_CASE("curve grid contains every breakpoint") {
  const long double alpha = Frequency::golden().value();
  const auto grid = curve_grid(21, alpha, 4);
  for (const auto& b : beta_points(21, alpha)) {
    CHECK(std::binary_search(grid.begin(), grid.end(), b.beta));
  }
}

TEST_CASE("almost invariance and repulsion hold for golden sawtooth") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const auto cf = ContinuedFraction::of(Frequency::golden(), 30);
  const auto ai = almost_invariance_orbit(spec, cf, 6, 0.1234567, 120);
  CHECK(ai.qk == 13);
  CHECK(ai.violations == 0);
  CHECK(ai.max_deficit <= ai.bound + 1e-9);
  CHECK(ai.full_phases > 0);
  for (int K : {4, 8}) {
    const auto rep = eigenvalue_repulsion(spec, cf, 8, K, 0.4);
    CHECK(rep.qk == 34);
    CHECK(rep.violations == 0);
    if (!rep.skipped) CHECK(rep.min_gap >= rep.bound);
  }
}

TEST_CASE("general almost invariance matches the orbit variant on shared phases") {
  OperatorSpec spec;
  spec.lambda = 2.0;
  const auto cf = ContinuedFraction::of(Frequency::golden(), 30);
  const std::vector<int> rs{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  const std::vector<double> xs{0.05, 0.31, 0.62, 0.88};
  const auto rep = almost_invariance_deficit(spec, cf, 6, rs, xs);
  CHECK(rep.violations == 0);
  CHECK(rep.evaluated + rep.skipped == static_cast<int>(rs.size() * xs.size()));
  CHECK(rep.max_deficit <= rep.bound + 1e-9);
}
