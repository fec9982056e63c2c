#include <doctest.h>

#include <cmath>

#include "oracle/dense.hpp"
#include "qploc/ids.hpp"
#include "qploc/parallel.hpp"

using namespace qploc;

TEST_CASE("energy grid covers the spectrum with margin") {
  const auto g = ids_energy_grid(10.0, 0.005);
  CHECK(g.front() == doctest::Approx(-2.5));
  CHECK(g.back() >= 12.5 - 1e-12);
  CHECK(g[1] - g[0] == doctest::Approx(0.005));
}

TEST_CASE("IDS counts agree with dense eigenvalues") {
  OperatorSpec spec;
  spec.lambda = 4.0;
  const int n = 40;
  const int samples = 20;
  const std::vector<double> energies{-1.0, 0.5, 2.0, 3.3, 5.0};
  const auto t = ids_estimate(spec, n, energies, samples, Boundary::Periodic);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    int total = 0;
    for (int s = 0; s < samples; ++s) {
      const auto h = build(spec.with_phase(static_cast<double>(s) / samples), n, Boundary::Periodic);
      for (double mu : oracle::symmetric_eigenvalues(h.dense(), n)) total += mu <= energies[i];
    }
    CHECK(t.N[i] == doctest::Approx(static_cast<double>(total) / (n * samples)).epsilon(1e-15));
  }
}

TEST_CASE("IDS is monotone, normalized and thread independent") {
  OperatorSpec spec;
  spec.lambda = 2.0;
  const auto grid = ids_energy_grid(2.0, 0.01);
  set_thread_count(1);
  const auto a = ids_estimate(spec, 89, grid, 25, Boundary::Dirichlet);
  set_thread_count(3);
  const auto b = ids_estimate(spec, 89, grid, 25, Boundary::Dirichlet);
  set_thread_count(1);
  CHECK(a.N == b.N);
  CHECK(a.N.front() == 0.0);
  CHECK(a.N.back() == 1.0);
  for (std::size_t i = 1; i < a.N.size(); ++i) CHECK(a.N[i] >= a.N[i - 1]);
}

TEST_CASE("Lipschitz modulus for golden sawtooth") {
  OperatorSpec spec;
  spec.lambda = 10.0;
  const auto t = ids_estimate(spec, 233, ids_energy_grid(10.0, 0.005), 50, Boundary::Periodic);
  const auto lip = lipschitz_modulus(t, 10.0, 1.0, 0.0);
  CHECK(lip.bound == doctest::Approx(0.1));
  CHECK(lip.slack == doctest::Approx(2.0 / (233 * 0.005)));
  CHECK(lip.pass);
  CHECK(lip.max_slope > 0.0);
  // Sawtooth spectrum fills about [0, lambda] plus band edges.
  CHECK(spectrum_measure(t) == doctest::Approx(10.0).epsilon(0.05));
}
