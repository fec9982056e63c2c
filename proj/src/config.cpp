#include "qploc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "qploc/errors.hpp"

namespace qploc {

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("config: cannot parse value '" + text + "' for " + key);
  return value;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::int64_t> parse_list(const std::string& key, const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<std::int64_t>(key, trim(item)));
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"model",
       {{"frequency", [](ExperimentConfig& c, const std::string& v) { c.frequency = trim(v); }},
        {"potential", [](ExperimentConfig& c, const std::string& v) { c.potential = trim(v); }},
        {"lambda", [](ExperimentConfig& c, const std::string& v) { c.lambda = parse_number<double>("model.lambda", v); }},
        {"phase", [](ExperimentConfig& c, const std::string& v) { c.phase = parse_number<double>("model.phase", v); }}}},
      {"scales",
       {{"q", [](ExperimentConfig& c, const std::string& v) { c.scales = parse_list("scales.q", v); }},
        {"er", [](ExperimentConfig& c, const std::string& v) { c.er = parse_number<double>("scales.er", v); }},
        {"depth", [](ExperimentConfig& c, const std::string& v) { c.depth = parse_number<int>("scales.depth", v); }}}},
      {"energy",
       {{"step", [](ExperimentConfig& c, const std::string& v) { c.energy_step = parse_number<double>("energy.step", v); }},
        {"points",
         [](ExperimentConfig& c, const std::string& v) { c.energy_points = parse_number<int>("energy.points", v); }}}},
      {"phases",
       {{"samples",
         [](ExperimentConfig& c, const std::string& v) { c.phase_samples = parse_number<int>("phases.samples", v); }}}},
      {"tolerances",
       {{"eigenvalue", [](ExperimentConfig& c, const std::string& v) {
          c.eigenvalue_tolerance = parse_number<double>("tolerances.eigenvalue", v);
        }}}},
      {"lyapunov",
       {{"n", [](ExperimentConfig& c, const std::string& v) { c.lyapunov_n = parse_number<int>("lyapunov.n", v); }},
        {"sampling", [](ExperimentConfig& c, const std::string& v) { c.lyapunov_sampling = trim(v); }},
        {"samples",
         [](ExperimentConfig& c, const std::string& v) { c.lyapunov_samples = parse_number<int>("lyapunov.samples", v); }}}},
      {"ids",
       {{"n", [](ExperimentConfig& c, const std::string& v) { c.ids_n = parse_number<int>("ids.n", v); }},
        {"bc", [](ExperimentConfig& c, const std::string& v) { c.ids_bc = trim(v); }}}},
      {"ldt",
       {{"grid", [](ExperimentConfig& c, const std::string& v) { c.ldt_grid = parse_number<int>("ldt.grid", v); }},
        {"delta_fraction", [](ExperimentConfig& c, const std::string& v) {
           c.ldt_delta_fraction = parse_number<double>("ldt.delta_fraction", v);
         }}}},
      {"localize",
       {{"box", [](ExperimentConfig& c, const std::string& v) { c.localize_box = parse_number<int>("localize.box", v); }}}},
      {"output", {{"dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = trim(v); }}}},
  };
  return s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

}  // namespace

OperatorSpec ExperimentConfig::spec() const {
  OperatorSpec s;
  s.frequency = Frequency::parse(frequency);
  s.potential = MonotonePotential::parse(potential);
  s.lambda = lambda;
  s.phase = phase;
  return s;
}

ContinuedFraction ExperimentConfig::continued_fraction() const {
  return ContinuedFraction::of(Frequency::parse(frequency), depth);
}

int ExperimentConfig::scale_index(std::int64_t q) const {
  const auto cf = continued_fraction();
  for (int k = 1; k + 1 <= cf.depth(); ++k) {
    if (cf.q(k) == q) return k;
  }
  std::ostringstream os;
  os << "scale " << q << " is not a convergent denominator of " << frequency << "; available:";
  for (int k = 1; k + 1 <= cf.depth(); ++k) {
    if (cf.q(k) > 1000000) break;
    os << ' ' << to_string(cf.q(k));
  }
  throw ConfigError(os.str());
}

ExperimentConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  const auto& s = schema();
  for (const auto& [section, entries] : tree) {
    const auto sec = s.find(section);
    if (sec == s.end()) {
      if (entries.empty() && !entries.data().empty()) {
        throw ConfigError("config: key '" + section + "' must belong to a section");
      }
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : entries) {
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      it->second(cfg, value.data());
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
  try {
    (void)Frequency::parse(cfg.frequency);
    (void)MonotonePotential::parse(cfg.potential);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  require(cfg.lambda >= 0.0 && cfg.lambda <= 1e6, "model.lambda must lie in [0, 1e6]");
  require(cfg.phase >= 0.0 && cfg.phase < 1.0, "model.phase must lie in [0, 1)");
  require(cfg.depth >= 4 && cfg.depth <= 80, "scales.depth must lie in [4, 80]");
  require(cfg.er > 0.0 && cfg.er < 1.0, "scales.er must lie in (0, 1)");
  require(cfg.energy_step > 0.0 && cfg.energy_step <= 0.01, "energy.step must lie in (0, 0.01]");
  require(cfg.energy_points >= 2, "energy.points must be >= 2");
  require(cfg.phase_samples >= 20, "phases.samples must be >= 20");
  require(cfg.eigenvalue_tolerance >= 1e-13 && cfg.eigenvalue_tolerance <= 1e-6,
          "tolerances.eigenvalue must lie in [1e-13, 1e-6]");
  require(cfg.lyapunov_n >= 1, "lyapunov.n must be >= 1");
  require(cfg.lyapunov_sampling == "birkhoff" || cfg.lyapunov_sampling == "grid",
          "lyapunov.sampling must be birkhoff or grid");
  require(cfg.lyapunov_samples >= 1, "lyapunov.samples must be >= 1");
  require(cfg.ids_n >= 50, "ids.n must be >= 50");
  require(cfg.ids_bc == "periodic" || cfg.ids_bc == "dirichlet", "ids.bc must be periodic or dirichlet");
  require(cfg.ldt_grid >= 1000, "ldt.grid must be >= 1000");
  require(cfg.ldt_delta_fraction > 0.0 && cfg.ldt_delta_fraction < 1.0, "ldt.delta_fraction must lie in (0, 1)");
  require(cfg.localize_box >= 20 && cfg.localize_box <= 10000, "localize.box must lie in [20, 10000]");
  require(!cfg.output_dir.empty(), "output.dir must be nonempty");
  require(!cfg.scales.empty(), "scales.q must list at least one scale");
  for (auto q : cfg.scales) (void)cfg.scale_index(q);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_config(const ExperimentConfig& c, std::ostream& out) {
  std::string scales;
  for (std::size_t i = 0; i < c.scales.size(); ++i) scales += (i ? "," : "") + std::to_string(c.scales[i]);
  out << "[model]\n"
      << "frequency = " << c.frequency << "\n"
      << "potential = " << c.potential << "\n"
      << "lambda = " << format_double(c.lambda) << "\n"
      << "phase = " << format_double(c.phase) << "\n\n"
      << "[scales]\n"
      << "q = " << scales << "\n"
      << "er = " << format_double(c.er) << "\n"
      << "depth = " << c.depth << "\n\n"
      << "[energy]\n"
      << "step = " << format_double(c.energy_step) << "\n"
      << "points = " << c.energy_points << "\n\n"
      << "[phases]\n"
      << "samples = " << c.phase_samples << "\n\n"
      << "[tolerances]\n"
      << "eigenvalue = " << format_double(c.eigenvalue_tolerance) << "\n\n"
      << "[lyapunov]\n"
      << "n = " << c.lyapunov_n << "\n"
      << "sampling = " << c.lyapunov_sampling << "\n"
      << "samples = " << c.lyapunov_samples << "\n\n"
      << "[ids]\n"
      << "n = " << c.ids_n << "\n"
      << "bc = " << c.ids_bc << "\n\n"
      << "[ldt]\n"
      << "grid = " << c.ldt_grid << "\n"
      << "delta_fraction = " << format_double(c.ldt_delta_fraction) << "\n\n"
      << "[localize]\n"
      << "box = " << c.localize_box << "\n\n"
      << "[output]\n"
      << "dir = " << c.output_dir << "\n";
}

std::vector<std::string> preset_names() {
  return {"golden-sawtooth-lambda2", "golden-sawtooth-lambda10", "silver-blend0.5-lambda10"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "golden-sawtooth-lambda10") return c;
  if (name == "golden-sawtooth-lambda2") {
    c.lambda = 2.0;
    return c;
  }
  if (name == "silver-blend0.5-lambda10") {
    c.frequency = "silver";
    c.potential = "blend:0.5";
    c.scales = {12, 29, 70};
    return c;
  }
  std::string known;
  for (const auto& n : preset_names()) known += " " + n;
  throw ConfigError("unknown preset '" + name + "'; available:" + known);
}

}  // namespace qploc
