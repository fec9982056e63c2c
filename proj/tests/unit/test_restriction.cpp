#include <doctest.h>

#include <cmath>

#include "qploc/errors.hpp"
#include "qploc/restriction.hpp"

using namespace qploc;

TEST_CASE("dense matrix has the potential on the diagonal and unit hopping") {
  OperatorSpec spec;
  spec.lambda = 2.0;
  spec.phase = 0.37;
  for (auto bc : {Boundary::Dirichlet, Boundary::Periodic}) {
    const auto h = build(spec, 6, bc);
    const auto m = h.dense();
    for (int i = 0; i < 6; ++i) {
      CHECK(m[i * 6 + i] == spec.site_value(i));
      for (int j = 0; j < 6; ++j) {
        if (i == j) continue;
        const bool neighbour = std::abs(i - j) == 1;
        const bool corner = bc == Boundary::Periodic && std::abs(i - j) == 5;
        CHECK(m[i * 6 + j] == ((neighbour || corner) ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("small periodic rings fold the corner entries") {
  OperatorSpec spec;
  spec.lambda = 0.0;
  const auto one = build(spec, 1, Boundary::Periodic).dense();
  CHECK(one[0] == 2.0);
  const auto two = build(spec, 2, Boundary::Periodic).dense();
  CHECK(two[1] == 2.0);
  CHECK(two[2] == 2.0);
}

TEST_CASE("first_site shifts the window along the orbit") {
  OperatorSpec spec;
  spec.lambda = 1.0;
  spec.phase = 0.1;
  const auto h = build(spec, 5, Boundary::Dirichlet, false, 7);
  for (int i = 0; i < 5; ++i) CHECK(h.diag[i] == spec.site_value(7 + i));
}

TEST_CASE("every breakpoint jump is rank one with trace -lambda") {
  OperatorSpec spec;
  spec.lambda = 2.0;
  for (int n : {13, 34}) {
    for (int k = 0; k < n; ++k) {
      const auto j = jump_perturbation(spec, n, k);
      CHECK(j.rank_one);
      CHECK(j.nonzero_entries == 1);
      CHECK(j.trace == doctest::Approx(-2.0).epsilon(1e-12));
      CHECK(j.site == j.expected_site);
    }
  }
}

TEST_CASE("bad inputs are rejected") {
  OperatorSpec spec;
  CHECK_THROWS_AS(build(spec, 0, Boundary::Dirichlet), PreconditionError);
  CHECK_THROWS_AS(build(spec, 65, Boundary::Dirichlet).dense(), PreconditionError);
  CHECK_THROWS_AS(parse_boundary("open"), PreconditionError);
  CHECK(parse_boundary("periodic") == Boundary::Periodic);
}
