#include "qploc/ids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qploc/errors.hpp"
#include "qploc/parallel.hpp"
#include "qploc/spectral.hpp"

namespace qploc {

std::vector<double> ids_energy_grid(double lambda, double dE, double margin) {
  if (!(dE > 0.0)) throw PreconditionError("ids_energy_grid: step must be positive");
  const double lo = -2.0 - margin + std::min(0.0, lambda);
  const double hi = 2.0 + margin + std::max(0.0, lambda);
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / dE)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * dE;
  return grid;
}

IdsTable ids_estimate(const OperatorSpec& spec, int n, std::span<const double> energies, int samples, Boundary bc) {
  if (n < 1) throw PreconditionError("ids_estimate: n must be >= 1");
  if (samples < 1) throw PreconditionError("ids_estimate: need at least one phase sample");
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (!(energies[i] > energies[i - 1])) throw PreconditionError("ids_estimate: energy grid must increase");
  }
  const auto S = static_cast<std::size_t>(samples);
  std::vector<std::vector<int>> counts(S);
  parallel_for(S, [&](std::size_t s) {
    const auto h = build(spec.with_phase(static_cast<double>(s) / static_cast<double>(S)), n, bc);
    auto& c = counts[s];
    c.resize(energies.size());
    // #{mu <= E} = #{mu < E'} for the next representable E' above E.
    for (std::size_t i = 0; i < energies.size(); ++i) {
      c[i] = count_below(h, std::nextafter(energies[i], std::numeric_limits<double>::infinity()));
    }
  });
  IdsTable t;
  t.E.assign(energies.begin(), energies.end());
  t.N.resize(energies.size());
  t.n = n;
  t.samples = samples;
  t.bc = bc;
  const double denom = static_cast<double>(n) * static_cast<double>(samples);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    long long total = 0;
    for (std::size_t s = 0; s < S; ++s) total += counts[s][i];
    t.N[i] = static_cast<double>(total) / denom;
  }
  // Counts are exact per phase, so monotonicity can only fail through the
  // counting kernel; enforce it defensively.
  for (std::size_t i = 1; i < t.N.size(); ++i) t.N[i] = std::max(t.N[i], t.N[i - 1]);
  return t;
}

LipschitzModulus lipschitz_modulus(const IdsTable& ids, double lambda, double gamma_minus, double rho) {
  if (!(lambda > 0.0)) throw PreconditionError("lipschitz_modulus: bound undefined for lambda = 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw PreconditionError("lipschitz_modulus: rho must lie in [0, 1)");
  const double dE = ids.step();
  if (!(dE > 0.0) || dE > 0.01 + 1e-12) throw PreconditionError("lipschitz_modulus: need energy step <= 0.01");
  LipschitzModulus r;
  for (std::size_t i = 0; i + 1 < ids.E.size(); ++i) {
    const double slope = (ids.N[i + 1] - ids.N[i]) / (ids.E[i + 1] - ids.E[i]);
    if (slope > r.max_slope) {
      r.max_slope = slope;
      r.max_slope_at = ids.E[i];
    }
  }
  r.bound = 1.0 / (lambda * (1.0 - rho) * gamma_minus);
  r.slack = 2.0 / (static_cast<double>(ids.n) * dE);
  r.pass = r.max_slope <= r.bound * 1.05 + r.slack;
  return r;
}

double spectrum_measure(const IdsTable& ids, double threshold) {
  std::size_t bins = 0;
  for (std::size_t i = 0; i + 1 < ids.N.size(); ++i) bins += ids.N[i + 1] - ids.N[i] > threshold;
  return static_cast<double>(bins) * ids.step();
}

}  // namespace qploc
