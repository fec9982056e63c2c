#include "qploc/restriction.hpp"

#include <cmath>
#include <string>

#include "qploc/errors.hpp"

namespace qploc {

const char* to_string(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "periodic"; }

Boundary parse_boundary(std::string_view text) {
  if (text == "dirichlet" || text == "D") return Boundary::Dirichlet;
  if (text == "periodic" || text == "P") return Boundary::Periodic;
  throw PreconditionError("unknown boundary condition '" + std::string(text) + "'");
}

std::vector<double> FiniteRestriction::dense() const {
  if (n > 64) throw PreconditionError("dense materialization is limited to n <= 64");
  const auto N = static_cast<std::size_t>(n);
  std::vector<double> m(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) m[i * N + i] = diag[i];
  for (std::size_t i = 0; i + 1 < N; ++i) {
    m[i * N + i + 1] += 1.0;
    m[(i + 1) * N + i] += 1.0;
  }
  if (bc == Boundary::Periodic) {
    if (n == 1) {
      m[0] += 2.0;
    } else if (n == 2) {
      m[1] += 1.0;
      m[2] += 1.0;
    } else {
      m[N - 1] += 1.0;
      m[(N - 1) * N] += 1.0;
    }
  }
  return m;
}

FiniteRestriction build(const OperatorSpec& spec, int n, Boundary bc, bool left_limit, long long first_site) {
  if (n < 1) throw PreconditionError("build: n must be >= 1");
  if (spec.lambda < 0.0) throw PreconditionError("build: lambda must be >= 0");
  FiniteRestriction h;
  h.spec = spec;
  h.n = n;
  h.bc = bc;
  h.left_limit = left_limit;
  h.first_site = first_site;
  h.diag.resize(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) h.diag[static_cast<std::size_t>(m)] = spec.site_value(first_site + m, left_limit);
  return h;
}

JumpReport jump_perturbation(const OperatorSpec& spec, int n, int k) {
  const auto betas = beta_points(n, spec.alpha());
  if (k < 0 || k >= n) throw PreconditionError("jump_perturbation: breakpoint index out of range");
  JumpReport r;
  r.k = k;
  r.beta = betas[static_cast<std::size_t>(k)].beta;
  r.expected_site = betas[static_cast<std::size_t>(k)].site;
  const OperatorSpec at = spec.with_phase(r.beta);
  const auto right = build(at, n, Boundary::Periodic, false);
  const auto left = build(at, n, Boundary::Periodic, true);
  double trace = 0.0;
  for (int m = 0; m < n; ++m) {
    const double d = right.diag[static_cast<std::size_t>(m)] - left.diag[static_cast<std::size_t>(m)];
    trace += d;
    if (std::fabs(d) > 1e-12) {
      ++r.nonzero_entries;
      r.site = m;
    }
  }
  r.trace = trace;
  if (r.nonzero_entries > 1) {
    throw PrecisionError("jump_perturbation: " + std::to_string(r.nonzero_entries) +
                         " sites jump at one breakpoint (phase collision)");
  }
  r.rank_one = r.nonzero_entries == 1;
  r.trace_ok = std::fabs(trace + spec.lambda) <= 1e-12;
  return r;
}

}  // namespace qploc
