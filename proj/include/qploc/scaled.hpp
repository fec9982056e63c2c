#pragma once

// Overflow-safe reals and 2x2 matrices: a mantissa normalized to [1, 2) in
// magnitude and a binary exponent.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace qploc {

inline constexpr double kLn2 = 0.693147180559945309417232121458176568;

class ScaledValue {
 public:
  ScaledValue() = default;
  explicit ScaledValue(double v) { set(v, 0); }
  static ScaledValue from_parts(double mantissa, std::int64_t exp2) {
    ScaledValue s;
    s.set(mantissa, exp2);
    return s;
  }

  double mantissa() const { return mant_; }
  std::int64_t exponent2() const { return exp2_; }
  // Natural-log scale: value = mantissa * e^{log_scale()}.
  double log_scale() const { return static_cast<double>(exp2_) * kLn2; }
  // ln|value|; -inf for zero.
  double log_abs() const;
  int sign() const { return mant_ > 0.0 ? 1 : (mant_ < 0.0 ? -1 : 0); }
  bool is_zero() const { return mant_ == 0.0; }
  // May overflow to +-inf or underflow to 0.
  double to_double() const { return std::ldexp(mant_, static_cast<int>(clamp_exp(exp2_))); }

  ScaledValue operator-() const { return from_parts(-mant_, exp2_); }
  friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    return from_parts(a.mant_ * b.mant_, a.exp2_ + b.exp2_);
  }
  friend ScaledValue operator*(const ScaledValue& a, double b) {
    ScaledValue s(b);
    return a * s;
  }
  friend ScaledValue operator/(const ScaledValue& a, const ScaledValue& b);
  friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b);
  friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) { return a + (-b); }

  std::string str() const;

 private:
  static std::int64_t clamp_exp(std::int64_t e) { return e > 4096 ? 4096 : (e < -4096 ? -4096 : e); }
  void set(double m, std::int64_t e);

  double mant_ = 0.0;
  std::int64_t exp2_ = 0;
};

// Relative agreement |a - b| / max(|a|, |b|); 0 when both vanish.
double relative_difference(const ScaledValue& a, const ScaledValue& b);

// 2x2 matrix [[a, b], [c, d]] * 2^exp2 with max |entry| in [1, 2).
class ScaledMatrix {
 public:
  ScaledMatrix() { reset_identity(); }
  static ScaledMatrix identity() { return ScaledMatrix(); }

  void reset_identity() {
    m_ = {1.0, 0.0, 0.0, 1.0};
    exp2_ = 0;
  }
  // this <- [[t, -1], [1, 0]] * this  (one Schroedinger step, t = E - V)
  void step(double t) {
    const double a = t * m_[0] - m_[2];
    const double b = t * m_[1] - m_[3];
    m_[2] = m_[0];
    m_[3] = m_[1];
    m_[0] = a;
    m_[1] = b;
    normalize();
  }

  ScaledValue entry(int i, int j) const { return ScaledValue::from_parts(m_[static_cast<std::size_t>(2 * i + j)], exp2_); }
  double mantissa(int i, int j) const { return m_[static_cast<std::size_t>(2 * i + j)]; }
  std::int64_t exponent2() const { return exp2_; }
  double log_scale() const { return static_cast<double>(exp2_) * kLn2; }
  ScaledValue det() const;
  // ln of the largest singular value.
  double log_spectral_norm() const;

 private:
  void normalize();

  std::array<double, 4> m_{};
  std::int64_t exp2_ = 0;
};

}  // namespace qploc
