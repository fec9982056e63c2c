#include <doctest.h>

#include <sstream>

#include "qploc/config.hpp"
#include "qploc/errors.hpp"

using namespace qploc;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("defaults describe the golden sawtooth model at lambda 10") {
  const ExperimentConfig c;
  CHECK(c.frequency == "golden");
  CHECK(c.lambda == 10.0);
  CHECK(c.scales == std::vector<std::int64_t>{13, 34, 89});
  CHECK(c.scale_index(89) == 10);
}

TEST_CASE("INI values override defaults") {
  const auto c = parse("; comment\n[model]\nlambda = 2.5\nfrequency = silver\n[scales]\nq = 12, 29\n[ids]\nbc = dirichlet\n");
  CHECK(c.lambda == 2.5);
  CHECK(c.frequency == "silver");
  CHECK(c.scales == std::vector<std::int64_t>{12, 29});
  CHECK(c.ids_bc == "dirichlet");
}

TEST_CASE("misspelled keys and sections are errors") {
  CHECK_THROWS_AS(parse("[model]\nlamda = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[modle]\nlambda = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\nlambda = two\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\npotential = sawtoth\n"), ConfigError);
  CHECK_THROWS_AS(parse("[tolerances]\neigenvalue = 1e-20\n"), ConfigError);
}

TEST_CASE("infeasible scales list the available denominators") {
  try {
    (void)parse("[scales]\nq = 13, 14\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    INFO(what);
    CHECK(what.find("14") != std::string::npos);
    CHECK(what.find("available: 1 2 3 5 8 13 21 34 55 89") != std::string::npos);
  }
}

TEST_CASE("written configs parse back to the same values") {
  for (const auto& name : preset_names()) {
    const auto c = preset(name);
    std::ostringstream out;
    write_config(c, out);
    const auto back = parse(out.str());
    std::ostringstream again;
    write_config(back, again);
    CHECK(out.str() == again.str());
  }
  CHECK_THROWS_AS(preset("golden"), ConfigError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.005) == "0.005");
}
