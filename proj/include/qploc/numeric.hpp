#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qploc {

// Fractional part in [0, 1), computed in extended precision.
inline long double frac(long double y) {
  long double f = y - std::floor(y);
  if (f >= 1.0L) f = 0.0L;
  return f;
}

// Distance from y to the nearest integer.
inline long double torus_distance(long double y) {
  long double f = frac(y);
  return f < 0.5L ? f : 1.0L - f;
}

// Summation order depends only on the length of the input, so results are
// identical no matter how the terms were produced.
double pairwise_sum(std::span<const double> values);

inline double pairwise_mean(std::span<const double> values) {
  return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}

// Evenly spaced grid of `count` points on [lo, hi] (inclusive).
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace qploc
