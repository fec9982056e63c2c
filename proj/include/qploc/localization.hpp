#pragma once

// Green's functions of Dirichlet boxes, regularity of lattice sites, box
// eigenpairs and exponential-decay fits.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qploc/potential.hpp"
#include "qploc/scaled.hpp"

namespace qploc {

// G_[a,b](x; m, n) by a pivoted tridiagonal solve of (H_[a,b] - E) u = e_n.
// Throws ConditioningError when E is within 1e-12 of a box eigenvalue.
double green_element(const OperatorSpec& spec, long long a, long long b, long long m, long long n, double E);

// Same element from the determinant quotient
//   G(m, n) = (-1)^{m+n} P_{m-a}(x + a alpha) P_{b-n}(x + (n+1) alpha) / P_{b-a+1}(x + a alpha), m <= n.
ScaledValue green_quotient(const OperatorSpec& spec, long long a, long long b, long long m, long long n, double E);

// Column n of the box Green's function (all m at once).
std::vector<double> green_column(const OperatorSpec& spec, long long a, long long b, long long n, double E);

struct RegularityResult {
  bool regular = false;
  long long n1 = 0;  // witness window [n1, n2] when regular
  long long n2 = 0;
  int windows_checked = 0;
};

// (mu, q)-regularity of site m for the phase in spec.
RegularityResult regularity_test(const OperatorSpec& spec, long long m, double mu, int q, double E);

struct SingularSeparation {
  std::vector<long long> singular;
  long long min_far_distance = -1;  // min |m - n| over singular pairs farther than (q+1)/2; -1 if none
  double mu = 0.0;
};

// Scans [lo, hi] for (gamma - delta, q)-singular sites.
SingularSeparation singular_separation(const OperatorSpec& spec, int q, double E, double delta, double gamma,
                                       long long lo, long long hi);

struct EigenPair {
  double E = 0.0;
  int n = 0;                    // box size
  int n0 = 0;                   // leftmost maximum of |psi|
  std::vector<double> psi;      // psi(n0) = 1, max |psi| = 1
  std::vector<double> log_abs;  // ln|psi|, resolved far below double underflow
  // Values of log_abs below this carry no information.
  double log_floor = -std::numeric_limits<double>::infinity();
  double residual = 0.0;        // max_i |((H - E) psi)_i|
};

// Eigenpairs of H_n(x) on [0, n - 1] with eigenvalues in [e_lo, e_hi].
// Eigenvectors come from the twisted factorization at each eigenvalue;
// nearly degenerate vectors are re-orthogonalized.
std::vector<EigenPair> box_eigenpairs(const OperatorSpec& spec, int n, double e_lo, double e_hi);

// Same, selected by eigenvalue index range [first, last).
std::vector<EigenPair> box_eigenpairs_by_index(const OperatorSpec& spec, int n, int first, int last);

enum class Verdict { Localized, Extended, Inconclusive };
const char* to_string(Verdict v);

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int window_lo = 0;  // distance range from n0
  int window_hi = 0;
  int points = 0;
  bool rate_reported = false;  // r2 >= 0.9
  Verdict verdict = Verdict::Inconclusive;
};

// Least squares of ln|psi(n)| against -|n - n0| for |n - n0| in [n/20, n/4].
DecayFit decay_fit(const EigenPair& pair, double gammaE, double delta);

struct ExpansionCheck {
  double max_residual = 0.0;
  double max_green = 0.0;  // conditioning factor: max |G| on the two edge columns
};

// psi(m) + G(m, n1) psi(n1 - 1) + G(m, n2) psi(n2 + 1) over the window.
// Throws ConditioningError when E is within 1e-6 of the window spectrum.
ExpansionCheck expansion_reconstruction(const OperatorSpec& spec, const EigenPair& pair, int n1, int n2);

}  // namespace qploc
