#include "qploc/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

#include "qploc/errors.hpp"
#include "qploc/numeric.hpp"

namespace qploc {

MonotonePotential MonotonePotential::sawtooth() {
  return custom("sawtooth", [](double y) { return y; }, [](double) { return 1.0; }, 1.0, 1.0);
}

MonotonePotential MonotonePotential::blend(double c) {
  if (!(std::fabs(c) < 1.0)) throw PreconditionError("blend potential: need |c| < 1");
  std::ostringstream name;
  name.precision(17);
  name << "blend:" << c;
  return custom(
      name.str(), [c](double y) { return (1.0 - c) * y + c * y * y; },
      [c](double y) { return 1.0 - c + 2.0 * c * y; }, 1.0 - std::fabs(c), 1.0 + std::fabs(c));
}

MonotonePotential MonotonePotential::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw PreconditionError("pwl potential: need at least two knots");
  if (knots.front() != std::pair{0.0, 0.0} || knots.back() != std::pair{1.0, 1.0}) {
    throw PreconditionError("pwl potential: knots must start at (0,0) and end at (1,1)");
  }
  std::vector<double> slopes;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double dx = knots[i].first - knots[i - 1].first;
    const double dy = knots[i].second - knots[i - 1].second;
    if (!(dx > 0.0) || !(dy > 0.0)) throw PreconditionError("pwl potential: knots must be strictly increasing");
    slopes.push_back(dy / dx);
  }
  std::vector<double> kinks;
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) kinks.push_back(knots[i].first);

  std::ostringstream name;
  name.precision(17);
  name << "pwl:[";
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (i) name << ',';
    name << '(' << knots[i].first << ',' << knots[i].second << ')';
  }
  name << ']';

  auto segment = [knots](double y) {
    auto it = std::upper_bound(knots.begin(), knots.end(), y,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    std::size_t i = static_cast<std::size_t>(std::distance(knots.begin(), it));
    return std::clamp<std::size_t>(i, 1, knots.size() - 1) - 1;
  };
  auto value = [knots, slopes, segment](double y) {
    const std::size_t s = segment(y);
    return knots[s].second + slopes[s] * (y - knots[s].first);
  };
  auto derivative = [slopes, segment](double y) { return slopes[segment(y)]; };
  return custom(name.str(), value, derivative, *std::min_element(slopes.begin(), slopes.end()),
                *std::max_element(slopes.begin(), slopes.end()), std::move(kinks));
}

MonotonePotential MonotonePotential::custom(std::string name, Fn value, Fn derivative, double gamma_minus,
                                            double gamma_plus, std::vector<double> kinks) {
  if (!(gamma_minus > 0.0) || gamma_plus < gamma_minus) {
    throw PreconditionError("potential: need 0 < gamma_minus <= gamma_plus");
  }
  MonotonePotential v;
  v.value_ = std::move(value);
  v.derivative_ = std::move(derivative);
  v.gamma_minus_ = gamma_minus;
  v.gamma_plus_ = gamma_plus;
  v.name_ = std::move(name);
  v.kinks_ = std::move(kinks);
  return v;
}

MonotonePotential MonotonePotential::parse(std::string_view text) {
  if (text == "sawtooth") return sawtooth();
  if (text.starts_with("blend:")) {
    const std::string s(text.substr(6));
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw PreconditionError("potential: cannot parse '" + std::string(text) + "'");
    return blend(c);
  }
  if (text.starts_with("pwl:[") && text.ends_with("]")) {
    const std::string body(text.substr(5, text.size() - 6));
    static const std::regex pair_re(R"(\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\))");
    std::vector<std::pair<double, double>> knots;
    for (auto it = std::sregex_iterator(body.begin(), body.end(), pair_re); it != std::sregex_iterator(); ++it) {
      knots.emplace_back(std::stod((*it)[1].str()), std::stod((*it)[2].str()));
    }
    return piecewise_linear(std::move(knots));
  }
  throw PreconditionError("potential: unknown potential '" + std::string(text) +
                          "' (expected sawtooth, blend:<c> or pwl:[(x,y),...])");
}

double eval_periodic(const MonotonePotential& v, double x) {
  return v.value(static_cast<double>(frac(static_cast<long double>(x))));
}

LipschitzReport validate_lipschitz(const MonotonePotential& v, int grid_size) {
  if (grid_size < 1000) throw PreconditionError("validate_lipschitz: grid size must be >= 1000");
  LipschitzReport r;
  r.grid_size = grid_size;
  r.min_slope = std::numeric_limits<double>::infinity();
  r.max_slope = -std::numeric_limits<double>::infinity();
  const double h = 1.0 / grid_size;
  const double gm = v.gamma_minus();
  const double gp = v.gamma_plus();
  std::vector<double> values(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) values[static_cast<std::size_t>(i)] = v.value(i * h);
  for (int i = 0; i < grid_size; ++i) {
    for (int s = 1; s <= 10 && i + s < grid_size; ++s) {
      const double x = i * h;
      const double y = (i + s) * h;
      const double dv = values[static_cast<std::size_t>(i + s)] - values[static_cast<std::size_t>(i)];
      const double dx = y - x;
      const double slope = dv / dx;
      r.min_slope = std::min(r.min_slope, slope);
      r.max_slope = std::max(r.max_slope, slope);
      const double slack = 1e-12 * std::max(1.0, gp);
      if (dv < gm * dx - slack || dv > gp * dx + slack) {
        std::ostringstream os;
        os << "potential '" << v.name() << "' violates Lipschitz monotonicity on (" << x << ", " << y
           << "): slope " << slope << " outside [" << gm << ", " << gp << "]";
        throw ValidationError(os.str(), x, y);
      }
    }
  }
  return r;
}

long double OperatorSpec::site_phase(long long m) const {
  return frac(static_cast<long double>(phase) + static_cast<long double>(m) * alpha());
}

double OperatorSpec::site_value(long long m, bool left_limit) const {
  const long double y = site_phase(m);
  if (y < kBreakpointTolerance || y > 1.0L - kBreakpointTolerance) return left_limit ? lambda : 0.0;
  return lambda * potential.value(static_cast<double>(y));
}

OperatorSpec OperatorSpec::with_phase(double x) const {
  OperatorSpec s = *this;
  s.phase = x;
  return s;
}

OperatorSpec OperatorSpec::with_lambda(double l) const {
  OperatorSpec s = *this;
  s.lambda = l;
  return s;
}

std::vector<double> sample_orbit(const OperatorSpec& spec, long long m_begin, long long m_end) {
  std::vector<double> out;
  if (m_end <= m_begin) return out;
  out.reserve(static_cast<std::size_t>(m_end - m_begin));
  for (long long m = m_begin; m < m_end; ++m) {
    out.push_back(spec.site_value(m));
  }
  return out;
}

}  // namespace qploc
