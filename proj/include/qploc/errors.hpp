#pragma once

#include <stdexcept>
#include <string>

namespace qploc {

// A caller passed arguments outside an operation's domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Floating-point resolution was insufficient for the requested computation
// (e.g. an irrational frequency that looks rational at the working precision).
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact integer storage overflowed.
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// A numerical routine could not produce a trustworthy answer.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double distance)
      : std::runtime_error(what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

// Potential failed the Lipschitz-monotonicity contract on the pair (x, y).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, double x, double y)
      : std::runtime_error(what), x_(x), y_(y) {}
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

// Invalid experiment configuration (unknown keys, bad values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qploc
