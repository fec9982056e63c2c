#pragma once

// The numbered acceptance suite shared by `qploc verify` and the acceptance
// test binary.

#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "qploc/config.hpp"

namespace qploc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;     // one line, deterministic
  nlohmann::json metrics;  // deterministic numbers only (no timings)
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 14;

std::string criterion_name(int id);

// Runs one criterion (1..13) at the configured model. Criterion 14 needs the
// rest of the suite and is only available through run_verify.
CriterionResult run_criterion(int id, const ExperimentConfig& cfg);

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
  // Deterministic document: config, per-criterion pass flags and metrics.
  nlohmann::json to_json(const ExperimentConfig& cfg) const;
};

using ProgressFn = std::function<void(const CriterionResult&)>;

// Criteria 1..13 at the current thread count, then criterion 14: the suite is
// repeated at a different thread count and both documents are compared.
VerifyReport run_verify(const ExperimentConfig& cfg, const ProgressFn& progress = {});

// Criteria 1..13 only.
std::vector<CriterionResult> run_core(const ExperimentConfig& cfg, const ProgressFn& progress = {});

}  // namespace qploc
