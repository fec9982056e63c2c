#pragma once

// Continued-fraction machinery for the rotation number alpha in (0, 1):
// convergents, torus norms, the two-gap structure of orbit segments, good
// denominators and finite-horizon Diophantine checks.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qploc {

using Int128 = __int128;

std::string to_string(Int128 value);

// A frequency alpha, given either as a coefficient rule (eventually periodic
// continued fraction) or as a plain number.
class Frequency {
 public:
  static Frequency golden();  // [0; 1, 1, 1, ...]
  static Frequency silver();  // [0; 2, 2, 2, ...]
  // Coefficients a_1, a_2, ...: `prefix` once, then `period` repeated forever.
  static Frequency from_rule(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period);
  static Frequency numeric(long double value);

  // Accepts `golden`, `silver`, `cf:[a1,a2,...]` (whole list periodic),
  // `cf:[a1,...;p1,...]` (prefix ; period) and `num:<decimal>`.
  static Frequency parse(std::string_view text);

  long double value() const { return value_; }
  bool has_rule() const { return !period_.empty(); }
  // Coefficient a_k (k >= 1) from the rule.
  std::int64_t coefficient(int k) const;
  // Canonical text form; parse(label()) reproduces the frequency.
  const std::string& label() const { return label_; }

 private:
  Frequency() = default;
  long double value_ = 0.0L;
  std::vector<std::int64_t> prefix_;
  std::vector<std::int64_t> period_;
  std::string label_;
};

// Coefficients a_1..a_K with exact convergents p_k/q_k (k = 0..K) and the
// tails t_k = [a_k; a_{k+1}, ...] for k = 1..K+1.
class ContinuedFraction {
 public:
  // Euclidean expansion of a numeric alpha. Throws PrecisionError when the
  // remainder drops below 1e-14 within `depth` steps.
  static ContinuedFraction expand(long double alpha, int depth);
  static ContinuedFraction of(const Frequency& frequency, int depth);

  int depth() const { return static_cast<int>(coeffs_.size()); }
  long double alpha() const { return alpha_; }
  std::int64_t a(int k) const;
  Int128 p(int k) const;
  Int128 q(int k) const;
  // q_k as a 64-bit value; throws CapacityError if it does not fit.
  std::int64_t q64(int k) const;
  long double tail(int k) const;
  // Signed q_k alpha - p_k.
  long double convergent_error(int k) const;
  std::span<const std::int64_t> coefficients() const { return coeffs_; }
  std::vector<std::int64_t> denominators() const;

 private:
  void build_convergents();
  long double alpha_ = 0.0L;
  std::vector<std::int64_t> coeffs_;  // a_1..a_K
  std::vector<Int128> p_;             // p_0..p_K
  std::vector<Int128> q_;             // q_0..q_K
  std::vector<long double> tails_;    // t_1..t_{K+1}
};

// ||n alpha|| = distance from n alpha to the nearest integer.
double torus_norm(std::int64_t n, long double alpha);

struct GapStructure {
  int k = 0;
  std::int64_t qk = 0;
  std::vector<double> gaps;  // circular gaps, ascending
  std::int64_t large_count = 0;
  std::int64_t small_count = 0;
  double large_len = 0.0;
  double small_len = 0.0;
  // Predicted from the convergents: small = ||q_{k-1} alpha||,
  // large = small + ||q_k alpha||.
  double predicted_large_len = 0.0;
  double predicted_small_len = 0.0;
  bool counts_match = false;
  bool bounds_hold = false;
  double total_length = 0.0;
};

// Orbit points {j alpha}, j < q_k. Throws PrecisionError when more than two
// distinct gap lengths survive clustering at 1e-12.
GapStructure gap_structure(const ContinuedFraction& cf, int k);

struct ErEstimate {
  double min_ratio = 0.5;  // min_k q_{k-1}/q_{k+1}
  int argmin_k = 0;
  double tail_ratio = 0.5;  // ratio at the deepest available k
  std::vector<double> ratios;  // ratios[k-1] = q_{k-1}/q_{k+1}, k = 1..K-1
};

// Finite-depth stand-in for liminf q_{k-1}/q_{k+1}. Requires depth >= 4.
ErEstimate er_estimate(const ContinuedFraction& cf);

struct GoodDenominator {
  int k = 0;
  std::int64_t q = 0;
  double ratio = 0.0;
  bool on_boundary = false;  // ratio == er up to 1e-15
};

// All q_k (k = 1..K-1) with q_{k-1}/q_{k+1} <= er, ascending. Empty is valid.
std::vector<GoodDenominator> good_denominators(const ContinuedFraction& cf, double er);

struct DiophantineParams {
  double C = 0.0;
  double tau = 1.0;
  std::int64_t horizon = 0;
};

struct DiophantineReport {
  bool holds = false;
  std::int64_t worst_n = 0;
  double worst_ratio = 0.0;  // min over n of ||n alpha|| * n^tau
};

// Checks ||n alpha|| >= C n^-tau for every 1 <= n <= horizon.
DiophantineReport diophantine_check(const ContinuedFraction& cf, const DiophantineParams& params);

struct Breakpoint {
  double beta = 0.0;
  int site = 0;  // beta = {-site * alpha}
};

// Sorted {0, {-alpha}, ..., {-(n-1) alpha}} tagged with their sites.
std::vector<Breakpoint> beta_points(int n, long double alpha);

struct IndifferenceResult {
  bool admissible = false;
  double difference = 0.0;  // |{x + q_k alpha} - {x}|
  bool holds = false;       // difference <= 1/q_{k+1}
};

// Phase admissibility: {x} outside (1 - 1/q_{k+1}, 1) for k even and outside
// [0, 1/q_{k+1}) for k odd.
bool indifference_admissible(double x, int k, const ContinuedFraction& cf);
IndifferenceResult indifference_check(double x, int k, const ContinuedFraction& cf);

}  // namespace qploc
