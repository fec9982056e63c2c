#pragma once

// Large deviations of ln|P_{q_k}(x, E)| over the phase circle, the
// eigenvalue clusters around E, and the zero/jump count identity.

#include <span>
#include <utility>
#include <vector>

#include "qploc/potential.hpp"
#include "qploc/restriction.hpp"

namespace qploc {

struct DeviationReport {
  int qk = 0;
  double E = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double threshold = 0.0;  // q_k (gamma - delta), natural log
  int grid_size = 0;
  double measure = 0.0;            // grid fraction below threshold
  double refined_measure = 0.0;    // interval endpoints located by bisection
  int intervals = 0;               // circular runs of the covering
  double max_interval_length = 0.0;
  std::vector<std::pair<double, double>> covering;  // [start, end), end may exceed 1 when wrapping
};

// {x : |P_{q_k}(x, E)| < e^{q_k (gamma - delta)}} on the grid x_i = i / G.
DeviationReport deviation_set(const OperatorSpec& spec, int qk, double E, double delta, double gamma,
                              int grid_size);

struct ClusterSplit {
  int qk = 0;
  double x = 0.0;
  double E = 0.0;
  Boundary bc = Boundary::Dirichlet;
  std::vector<double> above;   // increasing, all > E
  std::vector<double> around;  // the window around E
  std::vector<double> below;   // decreasing, all < E
  double log_above = 0.0;      // ln|P^+|
  double log_around = 0.0;     // ln|P^0|
  double log_below = 0.0;      // ln|P^-|
  double log_total = 0.0;      // ln|P_{q_k}| from the determinant recursion
  double identity_error = 0.0;
  double fitted_c1 = 0.0;      // largest C with |nu_j^+- - E| >= j C / q_k
};

// window_c2 < 0 selects the window automatically: eigenvalues closer to E
// than C/(2 q_k), where C is the fit with the 8 nearest excluded (at most 8).
ClusterSplit cluster_split(const OperatorSpec& spec, int qk, double x, double E, int window_c2 = -1,
                           Boundary bc = Boundary::Dirichlet, double tol = 1e-13);

struct LogStabilityReport {
  int qk = 0;
  double max_deviation = 0.0;
  double ratio = 0.0;  // max_deviation / ln q_k
  int pairs = 0;
};

// max over pairs of |ln|P^+(x)| - ln|P^+(y)|| and the same for P^-.
LogStabilityReport log_stability(const OperatorSpec& spec, int qk, std::span<const std::pair<double, double>> pairs,
                                 double E, int window_c2 = 2);

// Pairs mixing breakpoints and interior points, deterministic in (qk, count).
std::vector<std::pair<double, double>> stability_pairs(int qk, long double alpha, int count);

struct ZeroCountReport {
  int poly_zeros = 0;
  int counting_jumps = 0;
  bool equal = false;
  bool refine_suggested = false;
};

// Sign changes of P_{q_k}(., E) inside the continuity intervals against
// #{beta_l : N(beta_l - 0, E) < N(beta_l, E)} (Dirichlet counting).
ZeroCountReport zero_count(const OperatorSpec& spec, int qk, double E, int grid_size);

}  // namespace qploc
