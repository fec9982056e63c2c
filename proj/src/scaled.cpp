#include "qploc/scaled.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace qploc {

void ScaledValue::set(double m, std::int64_t e) {
  if (m == 0.0 || !std::isfinite(m)) {
    mant_ = m == 0.0 ? 0.0 : m;
    exp2_ = 0;
    return;
  }
  int k = 0;
  const double f = std::frexp(m, &k);  // |f| in [0.5, 1)
  mant_ = 2.0 * f;
  exp2_ = e + k - 1;
}

double ScaledValue::log_abs() const {
  if (mant_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::fabs(mant_)) + log_scale();
}

ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
  return ScaledValue::from_parts(a.mant_ / b.mant_, a.exp2_ - b.exp2_);
}

ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t e = std::max(a.exp2_, b.exp2_);
  const auto shift = [&](const ScaledValue& v) {
    const std::int64_t d = v.exp2_ - e;
    return d < -1100 ? 0.0 : std::ldexp(v.mant_, static_cast<int>(d));
  };
  return ScaledValue::from_parts(shift(a) + shift(b), e);
}

std::string ScaledValue::str() const {
  std::ostringstream os;
  os.precision(17);
  os << mant_ << "*2^" << exp2_;
  return os.str();
}

double relative_difference(const ScaledValue& a, const ScaledValue& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  const ScaledValue diff = a - b;
  if (diff.is_zero()) return 0.0;
  const double la = a.log_abs();
  const double lb = b.log_abs();
  return std::exp(diff.log_abs() - std::max(la, lb));
}

void ScaledMatrix::normalize() {
  const double mx = std::max({std::fabs(m_[0]), std::fabs(m_[1]), std::fabs(m_[2]), std::fabs(m_[3])});
  if (mx == 0.0 || !std::isfinite(mx)) return;
  int k = 0;
  std::frexp(mx, &k);
  const int shift = 1 - k;  // brings mx into [1, 2)
  for (double& v : m_) v = std::ldexp(v, shift);
  exp2_ -= shift;
}

ScaledValue ScaledMatrix::det() const {
  return ScaledValue::from_parts(m_[0] * m_[3] - m_[1] * m_[2], 2 * exp2_);
}

double ScaledMatrix::log_spectral_norm() const {
  const double s = m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3];
  const double d = m_[0] * m_[3] - m_[1] * m_[2];
  const double disc = std::max(0.0, s * s - 4.0 * d * d);
  const double sigma2 = 0.5 * (s + std::sqrt(disc));
  return 0.5 * std::log(sigma2) + log_scale();
}

}  // namespace qploc
