#pragma once

// Eigenvalues of finite restrictions by Sturm-count bisection, eigenvalue
// curves x -> mu~_l(x) of the periodic restriction, and the interlacing,
// monotonicity, almost-invariance and repulsion checks built on them.

#include <span>
#include <vector>

#include "qploc/arithmetic.hpp"
#include "qploc/restriction.hpp"

namespace qploc {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kMinTolerance = 1e-13;

struct Spectrum {
  std::vector<double> eigenvalues;  // nondecreasing
  double tolerance = kDefaultTolerance;
  Boundary bc = Boundary::Dirichlet;
  int n = 0;
};

// Number of eigenvalues strictly below E of the Dirichlet tridiagonal matrix
// with the given diagonal and unit off-diagonals (negative LDL^T pivots).
int sturm_count(std::span<const double> diag, double E);

// Same for the periodic ring. For n >= 3 this is the Dirichlet count of the
// path on sites 2..n-1 plus the number of negative eigenvalues of the 2x2
// Schur complement on sites {0, 1} (Sylvester's law of inertia).
int periodic_sturm_count(std::span<const double> diag, double E);

int count_below(const FiniteRestriction& h, double E);

Spectrum dirichlet_spectrum(const FiniteRestriction& h, double tol = kDefaultTolerance);
Spectrum periodic_spectrum(const FiniteRestriction& h, double tol = kDefaultTolerance);
// Dispatches on h.bc.
Spectrum compute_spectrum(const FiniteRestriction& h, double tol = kDefaultTolerance);

// #{mu <= E}.
int counting(const Spectrum& s, double E);

// Each eigenvalue brackets a sign change of the characteristic polynomial
// within [mu - tol, mu + tol], checked with exact Sturm counts.
bool spectrum_residual_ok(const FiniteRestriction& h, const Spectrum& s);

// --------------------------------------------------------------------------
// Eigenvalue curves of the periodic restriction

struct CurveSample {
  double x = 0.0;
  double mu = 0.0;
  bool left_limit = false;
};

struct JumpRecord {
  int k = 0;
  double beta = 0.0;
  double mu_left = 0.0;   // mu~_l(beta_k - 0)
  double mu_right = 0.0;  // mu~_l(beta_k)
};

struct EigenCurve {
  int level = 0;
  std::vector<CurveSample> samples;  // grid samples then left-limit samples, by x
  std::vector<JumpRecord> jumps;
};

struct EigenCurveReport {
  int interlacing_violations = 0;
  int jump_sign_violations = 0;  // mu~_l(beta_k) > mu~_l(beta_k - 0)
  int slope_violations = 0;
  double min_slope = 0.0;
  double max_slope = 0.0;
  double slope_lower = 0.0;  // lambda gamma_-
  double slope_upper = 0.0;  // lambda gamma_+
  double max_interlacing_excess = 0.0;
};

struct EigenCurveSet {
  std::vector<double> grid;
  std::vector<EigenCurve> curves;
  EigenCurveReport report;
};

// Breakpoints united with a uniform grid of `density` points per smallest
// breakpoint gap.
std::vector<double> curve_grid(int n, long double alpha, int density = 8);

// Samples the requested levels (all when empty) over `grid`, which must
// contain every breakpoint. Throws PrecisionError on interlacing violations
// beyond 10 tol.
EigenCurveSet eigencurves(const OperatorSpec& spec, int n, std::span<const int> levels,
                          std::span<const double> grid, double tol = kDefaultTolerance);

// --------------------------------------------------------------------------
// Almost invariance and repulsion at good denominators

// x - j alpha satisfies the indifference precondition for every j = 0..r.
bool almost_invariance_admissible(double x, int r, int k, const ContinuedFraction& cf);

struct AlmostInvarianceReport {
  int k = 0;
  std::int64_t qk = 0;
  double bound = 0.0;  // lambda gamma_+ / q_{k+1}
  double max_deficit = 0.0;
  int evaluated = 0;   // (x, r) pairs compared
  int skipped = 0;     // inadmissible (x, r) pairs
  int violations = 0;  // deficit > bound + 10 tol
  int full_phases = 0; // base phases admissible for every requested r
  bool holds() const { return violations == 0; }
};

// max over m, x of |mu~_m(x) - mu~_m(x - r alpha)| for H~_{q_k}, each r in rs.
AlmostInvarianceReport almost_invariance_deficit(const OperatorSpec& spec, const ContinuedFraction& cf, int k,
                                                 std::span<const int> rs, std::span<const double> xs,
                                                 double tol = kDefaultTolerance);

// Base phases x_i = {x0 - i alpha}, i < count, and every r = 0..q_k - 1.
// Shifted phases x_i - r alpha stay on the same orbit, so only count + q_k - 1
// spectra are needed.
AlmostInvarianceReport almost_invariance_orbit(const OperatorSpec& spec, const ContinuedFraction& cf, int k,
                                               double x0, int count, double tol = kDefaultTolerance);

struct RepulsionReport {
  int k = 0;
  std::int64_t qk = 0;
  int K = 0;
  double er = 0.0;
  double bound = 0.0;
  double min_gap = 0.0;
  int checked = 0;
  int violations = 0;
  bool skipped = false;     // bound <= 0: vacuous
  bool left_limit = false;  // evaluated at beta_l - 0 (k even)
  bool holds() const { return violations == 0; }
};

// mu~_{m+K}(beta_l) - mu~_m(beta_l) against
//   lambda (K (1 - er) gamma_- / q_k - 3 gamma_+ / q_{k+1}).
RepulsionReport eigenvalue_repulsion(const OperatorSpec& spec, const ContinuedFraction& cf, int k, int K,
                                     double er, double tol = kDefaultTolerance);

}  // namespace qploc
