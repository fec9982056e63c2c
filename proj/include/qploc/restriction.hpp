#pragma once

// Finite restrictions of H(x) to [first, first + n - 1]: Dirichlet boxes and
// periodic rings, stored as their diagonals (off-diagonals are all ones).

#include <vector>

#include "qploc/potential.hpp"

namespace qploc {

enum class Boundary { Dirichlet, Periodic };

const char* to_string(Boundary bc);
Boundary parse_boundary(std::string_view text);

struct FiniteRestriction {
  OperatorSpec spec;
  int n = 0;
  Boundary bc = Boundary::Dirichlet;
  bool left_limit = false;
  long long first_site = 0;
  std::vector<double> diag;

  bool has_corners() const { return bc == Boundary::Periodic && n >= 3; }
  // Row-major dense matrix; only for n <= 64 (test oracles).
  std::vector<double> dense() const;
};

// diag[m] = lambda v({x + (first_site + m) alpha}); with left_limit, sites
// sitting exactly on the discontinuity take v(1 - 0) = 1.
FiniteRestriction build(const OperatorSpec& spec, int n, Boundary bc, bool left_limit = false,
                        long long first_site = 0);

struct JumpReport {
  int k = 0;
  double beta = 0.0;
  int site = -1;            // affected lattice site j with beta_k = {-j alpha}
  int expected_site = -1;   // site tag from beta_points
  int nonzero_entries = 0;
  double trace = 0.0;
  bool rank_one = false;
  bool trace_ok = false;    // trace == -lambda within 1e-12
};

// D = H~_n(beta_k) - H~_n(beta_k - 0). Throws PrecisionError on a phase
// collision (more than one nonzero entry).
JumpReport jump_perturbation(const OperatorSpec& spec, int n, int k);

}  // namespace qploc
