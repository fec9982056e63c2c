// Acceptance suite: one line per numbered criterion, exit status 1 if any
// criterion fails. Runs the default preset single-threaded; the determinism
// criterion repeats the suite with four workers.

#include <cstdio>

#include "qploc/config.hpp"
#include "qploc/parallel.hpp"
#include "qploc/verify.hpp"

int main() {
  const auto cfg = qploc::preset("golden-sawtooth-lambda10");
  qploc::set_thread_count(1);
  const auto report = qploc::run_verify(cfg, [](const qploc::CriterionResult& r) {
    std::printf("criterion %2d %-30s %s  %s (%.1f s)\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.summary.c_str(), r.seconds);
    std::fflush(stdout);
  });
  int failed = 0;
  for (const auto& r : report.criteria) failed += !r.pass;
  std::printf("%d/%d criteria pass\n", qploc::kCriterionCount - failed, qploc::kCriterionCount);
  return failed == 0 ? 0 : 1;
}
