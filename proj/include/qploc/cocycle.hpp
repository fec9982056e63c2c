#pragma once

// Determinant recursions, transfer matrices, finite-size Lyapunov exponents,
// the Thouless formula and the two-step monotonicity form.

#include <span>
#include <string>
#include <vector>

#include "qploc/ids.hpp"
#include "qploc/potential.hpp"
#include "qploc/scaled.hpp"

namespace qploc {

// P_0..P_n with P_j = det(H_j(x + first_site alpha) - E).
std::vector<ScaledValue> det_sequence(const OperatorSpec& spec, int n, double E, long long first_site = 0,
                                      bool left_limit = false);

// P_n alone, same convention.
ScaledValue char_det(const OperatorSpec& spec, long long first_site, int n, double E, bool left_limit = false);

// Same recursion on a given diagonal (entries lambda v - not shifted by E).
ScaledValue char_det(std::span<const double> diag, double E);

// M_n(x, E) = prod_{l = n-1..0} [[E - lambda v(x + l alpha), -1], [1, 0]].
ScaledMatrix transfer_matrix(const OperatorSpec& spec, int n, double E, long long first_site = 0,
                             bool left_limit = false);

struct TransferIdentityReport {
  int n = 0;
  double max_entry_error = 0.0;  // relative, worst of the four entries
  double det_error = 0.0;        // |det M_n - 1| / 2^{2e}, e the binary exponent of M_n
};

// Compares M_n with [[D_n(x), -D_{n-1}(x+a)], [D_{n-1}(x), -D_{n-2}(x+a)]]
// where D_j = det(E - H_j) = (-1)^j P_j.
TransferIdentityReport transfer_identity(const OperatorSpec& spec, int n, double E);

struct PeriodicDet {
  ScaledValue value;
  double relative_loss = 1.0;  // max operand / |result|
  bool cancellation = false;   // relative_loss > 1e6
};

// W~_n = P_n(x) - P_{n-2}(x + alpha) - 2 (-1)^n = det(H~_n - E), n >= 3.
PeriodicDet periodic_det(const OperatorSpec& spec, int n, double E, bool left_limit = false);

// --------------------------------------------------------------------------

enum class Sampling { Birkhoff, Grid };

const char* to_string(Sampling s);
Sampling parse_sampling(std::string_view text);

struct LyapunovSampling {
  Sampling mode = Sampling::Birkhoff;
  int samples = 32;  // windows (Birkhoff) or phases (Grid)
  double x0 = 0.0;   // orbit start for Birkhoff
  std::string describe(int n) const;
};

struct LyapunovPoint {
  double E = 0.0;
  double gamma = 0.0;
  double stderr_estimate = 0.0;
  int n = 0;
};

// (1/n) mean ln ||M_n|| (spectral norm). Birkhoff: windows [s n, (s+1) n) of
// the orbit of x0. Grid: phases x_s = s / S.
LyapunovPoint lyapunov_finite(const OperatorSpec& spec, int n, double E, const LyapunovSampling& sampling = {});

struct LyapCurve {
  std::vector<double> E;
  std::vector<double> gamma;
  std::vector<double> stderr_estimate;
  int n = 0;
  LyapunovSampling sampling;
};

LyapCurve lyapunov_curve(const OperatorSpec& spec, int n, std::span<const double> energies,
                         const LyapunovSampling& sampling = {});

// max{0, ln lambda - ln(2e / ((1 - rho) gamma_-))}. For the sawtooth pass
// rho = 0 and gamma_- = 1, which gives max{0, ln(lambda / 2e)}.
double lyapunov_lower_bound(double lambda, double gamma_minus, double rho);

struct UpperBoundRow {
  int n = 0;
  double max_excess = 0.0;  // max_x ln|P_n(x)| - n (gamma + kappa)
  int violations = 0;
};

struct UpperBoundReport {
  double E = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  std::vector<UpperBoundRow> rows;
  int threshold_n = -1;  // first n in the sweep after which no row fails; -1 if the last fails
};

UpperBoundReport upper_bound_check(const OperatorSpec& spec, std::span<const int> ns, double E, double kappa,
                                   std::span<const double> xs, double gamma);

struct ThoulessResult {
  double value = 0.0;
  bool truncated = false;  // E beyond the tabulated hull by more than 10
};

// Bin-wise integral of ln|E - E'| dN(E') with dN uniform inside each bin.
ThoulessResult thouless(const IdsTable& ids, double E);

struct MonotonicityForm {
  bool skipped = false;
  double finite_difference = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  bool positive = false;
};

// <d/dx {S(x + alpha) S(x) u}, J S(x + alpha) S(x) u> by central differences,
// against lambda v'(x) u1^2 + lambda v'(x + alpha) ((lambda v(x) - E) u1 + u2)^2.
MonotonicityForm monotonicity_form(const OperatorSpec& spec, double x, double h, double E, double u1, double u2);

}  // namespace qploc
