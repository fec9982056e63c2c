#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "qploc_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(QPLOC_CLI_PATH) + " " + args + " > " + (scratch() / "stdout.txt").string() +
                          " 2> " + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string out(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("arith prints the Fibonacci table") {
  CHECK(run("arith --freq golden --depth 15 --out " + out("arith")) == 0);
  const auto csv = slurp(scratch() / "arith" / "arith.csv");
  CHECK(csv.rfind("k,a,p,q,error,good\n", 0) == 0);
  CHECK(csv.find("15,1,610,987,") != std::string::npos);
  CHECK(fs::exists(scratch() / "arith" / "resolved-config.ini"));
}

TEST_CASE("free Lyapunov exponent at E = 3") {
  CHECK(run("lyapunov --lambda 0 --E 3 --out " + out("lyap")) == 0);
  std::ifstream in(scratch() / "lyap" / "lyapunov.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "E,gamma_n,n,sampling,stderr_estimate");
  const double gamma = std::stod(row.substr(row.find(',') + 1));
  CHECK(gamma == doctest::Approx(0.9624).epsilon(1e-3));
}

TEST_CASE("config errors exit with status 2") {
  std::ofstream(scratch() / "bad.ini") << "[model]\nlamda = 2\n";
  CHECK(run("ids --config " + out("bad.ini")) == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("lamda") != std::string::npos);
  CHECK(run("ldt --q 13,14 --out " + out("x")) == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("available") != std::string::npos);
  CHECK(run("ids --preset nonsense") == 2);
  CHECK(run("ids --no-such-flag") == 2);
}

TEST_CASE("outputs are identical across runs, thread counts and resolved configs") {
  const std::string base = "ids --lambda 2 --ids-n 55 --phases 20 --dE 0.01";
  CHECK(run(base + " --threads 1 --out " + out("ids1")) == 0);
  CHECK(run(base + " --threads 3 --out " + out("ids3")) == 0);
  const auto first = slurp(scratch() / "ids1" / "ids.csv");
  CHECK(first.rfind("E,N,n,samples,bc\n", 0) == 0);
  CHECK(first == slurp(scratch() / "ids3" / "ids.csv"));
  CHECK(slurp(scratch() / "ids1" / "ids.json") == slurp(scratch() / "ids3" / "ids.json"));
  CHECK(run("ids --config " + out("ids1/resolved-config.ini") + " --out " + out("ids_again")) == 0);
  CHECK(first == slurp(scratch() / "ids_again" / "ids.csv"));
}

TEST_CASE("localize writes pairs and a summary") {
  CHECK(run("localize --box 200 --lyap-n 2000 --out " + out("loc")) == 0);
  const auto csv = slurp(scratch() / "loc" / "pairs.csv");
  CHECK(csv.rfind("E,n0,rate,R2,verdict,gammaE\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(scratch() / "loc" / "summary.json"));
  CHECK(summary["pairs"] == 100);
}

TEST_CASE("verify subset reports criteria by number") {
  CHECK(run("verify --only 1,4 --out " + out("verify")) == 0);
  const auto doc = nlohmann::json::parse(slurp(scratch() / "verify" / "verify.json"));
  REQUIRE(doc["criteria"].size() == 2);
  CHECK(doc["criteria"][0]["id"] == 1);
  CHECK(doc["criteria"][1]["id"] == 4);
  CHECK(doc["all_pass"] == true);
}
