#pragma once

// Experiment configuration: a flat INI file with one section per module.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qploc/arithmetic.hpp"
#include "qploc/potential.hpp"

namespace qploc {

struct ExperimentConfig {
  // [model]
  std::string frequency = "golden";
  std::string potential = "sawtooth";
  double lambda = 10.0;
  double phase = 0.0;
  // [scales]
  std::vector<std::int64_t> scales{13, 34, 89};
  double er = 0.4;
  int depth = 30;
  // [energy]
  double energy_step = 0.005;
  int energy_points = 50;
  // [phases]
  int phase_samples = 50;
  // [tolerances]
  double eigenvalue_tolerance = 1e-10;
  // [lyapunov]
  int lyapunov_n = 10000;
  std::string lyapunov_sampling = "birkhoff";
  int lyapunov_samples = 32;
  // [ids]
  int ids_n = 233;
  std::string ids_bc = "periodic";
  // [ldt]
  int ldt_grid = 262144;
  double ldt_delta_fraction = 0.3;
  // [localize]
  int localize_box = 2000;
  // [output]
  std::string output_dir = "out";

  OperatorSpec spec() const;
  ContinuedFraction continued_fraction() const;
  // Index k with q_k == q; throws ConfigError listing the available q_k.
  int scale_index(std::int64_t q) const;
};

// Throws ConfigError on unknown sections or keys, malformed values and
// scales that are not convergent denominators.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);
void validate(const ExperimentConfig& cfg);

// Shortest round-trip text for a double.
std::string format_double(double v);

void write_config(const ExperimentConfig& cfg, std::ostream& out);

std::vector<std::string> preset_names();
// Throws ConfigError for unknown names.
ExperimentConfig preset(const std::string& name);

}  // namespace qploc
