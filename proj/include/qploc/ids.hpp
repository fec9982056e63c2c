#pragma once

// Integrated density of states from phase-averaged eigenvalue counts.

#include <span>
#include <vector>

#include "qploc/restriction.hpp"

namespace qploc {

struct IdsTable {
  std::vector<double> E;  // uniform grid
  std::vector<double> N;
  int n = 0;
  int samples = 0;
  Boundary bc = Boundary::Periodic;

  double step() const { return E.size() > 1 ? E[1] - E[0] : 0.0; }
};

// Uniform grid covering [-2 - margin, 2 + lambda + margin] with step dE.
std::vector<double> ids_energy_grid(double lambda, double dE, double margin = 0.5);

// N(E) = (1/(n S)) sum_s #{eigenvalues of the restriction at x_s = s/S that are <= E}.
IdsTable ids_estimate(const OperatorSpec& spec, int n, std::span<const double> energies, int samples, Boundary bc);

struct LipschitzModulus {
  double max_slope = 0.0;
  double max_slope_at = 0.0;  // left grid point of the steepest bin
  double bound = 0.0;         // 1 / (lambda (1 - rho) gamma_-)
  double slack = 0.0;         // 2 / (n dE)
  bool pass = false;
};

LipschitzModulus lipschitz_modulus(const IdsTable& ids, double lambda, double gamma_minus, double rho);

// dE * #{bins with mass above threshold}.
double spectrum_measure(const IdsTable& ids, double threshold = 1e-8);

}  // namespace qploc
