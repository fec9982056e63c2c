#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qploc/arithmetic.hpp"

namespace qploc {

// A 1-periodic potential v, increasing on [0, 1) with v(0) = 0, v(1 - 0) = 1
// and gamma_minus (y - x) <= v(y) - v(x) <= gamma_plus (y - x).
class MonotonePotential {
 public:
  using Fn = std::function<double(double)>;

  static MonotonePotential sawtooth();
  // v(x) = (1 - c) x + c x^2, |c| < 1.
  static MonotonePotential blend(double c);
  // Linear interpolation through knots (0,0), ..., (1,1), strictly increasing.
  static MonotonePotential piecewise_linear(std::vector<std::pair<double, double>> knots);
  // Arbitrary profile with declared slope bounds (no validation performed).
  static MonotonePotential custom(std::string name, Fn value, Fn derivative, double gamma_minus,
                                  double gamma_plus, std::vector<double> kinks = {});
  // `sawtooth`, `blend:<c>`, `pwl:[(x0,y0),(x1,y1),...]`.
  static MonotonePotential parse(std::string_view text);

  // v on [0, 1); callers reduce mod 1 first.
  double value(double y) const { return value_(y); }
  double derivative(double y) const { return derivative_(y); }
  double gamma_minus() const { return gamma_minus_; }
  double gamma_plus() const { return gamma_plus_; }
  const std::string& name() const { return name_; }
  // Interior points of [0, 1) where v is not differentiable.
  const std::vector<double>& kinks() const { return kinks_; }

 private:
  MonotonePotential() = default;
  Fn value_;
  Fn derivative_;
  double gamma_minus_ = 1.0;
  double gamma_plus_ = 1.0;
  std::string name_;
  std::vector<double> kinks_;
};

// v({x}).
double eval_periodic(const MonotonePotential& v, double x);

struct LipschitzReport {
  int grid_size = 0;
  double min_slope = 0.0;
  double max_slope = 0.0;
};

// Checks both slope inequalities on all grid pairs at most 10 steps apart.
// Throws ValidationError carrying the offending (x, y).
LipschitzReport validate_lipschitz(const MonotonePotential& v, int grid_size);

inline constexpr long double kBreakpointTolerance = 1e-13L;

// alpha, lambda, v and the phase x that define H(x).
struct OperatorSpec {
  Frequency frequency = Frequency::golden();
  double lambda = 1.0;
  MonotonePotential potential = MonotonePotential::sawtooth();
  double phase = 0.0;

  long double alpha() const { return frequency.value(); }
  // {x + m alpha} in extended precision.
  long double site_phase(long long m) const;
  // lambda v({x + m alpha}). Phases within kBreakpointTolerance of an integer
  // sit on the discontinuity: left_limit selects v(1 - 0) = 1, otherwise v(0) = 0.
  double site_value(long long m, bool left_limit = false) const;
  OperatorSpec with_phase(double x) const;
  OperatorSpec with_lambda(double l) const;
};

// lambda v({x + m alpha}) for m in [m_begin, m_end).
std::vector<double> sample_orbit(const OperatorSpec& spec, long long m_begin, long long m_end);

}  // namespace qploc
