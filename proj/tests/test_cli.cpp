#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "tunnelkit/commands.hpp"
#include "tunnelkit/config.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/report.hpp"

using namespace tunnelkit;
namespace fs = std::filesystem;

namespace {

const char *kQuartic = R"({
  "schema": "tunnelkit/1",
  "potential": {"family": "biased_quartic", "alpha": 300, "a": 1, "beta": 0.0}
})";

const char *kSweep = R"({
  "schema": "tunnelkit/1",
  "potential": {"family": "biased_quartic", "alpha": 300, "a": 1},
  "sweep": {"parameter": "tilde_eps", "from": 0, "to": 2.0, "steps": 9}
})";

const char *kCompare = R"({
  "schema": "tunnelkit/1",
  "potential": {"family": "biased_quartic", "alpha": 300, "a": 1, "beta": 1e-6},
  "oracle_grid": {"n_points": 6001}
})";

ErrorCode config_error(const std::string &text) {
  try {
    parse_config_text(text);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("config was accepted: " << text);
  return ErrorCode::DomainError;
}

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("tunnelkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string &name, const std::string &text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
  fs::path path_;
};

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI and returns its exit status.
int run(const std::string &args) {
  const std::string cmd = std::string("\"") + TUNNELKIT_BIN + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config_text(kQuartic);
  CHECK(std::holds_alternative<BiasedQuartic>(c.potential.family));
  CHECK(c.constants.hbar == 1.0);
  CHECK_FALSE(c.oracle_grid.has_value());

  const RunConfig s = parse_config_text(kSweep);
  REQUIRE(s.sweep.has_value());
  CHECK(s.sweep->steps == 9);
  CHECK(s.sweep->model == SweepModel::FrozenBarrier);
}

TEST_CASE("config errors") {
  CHECK(config_error("{") == ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1"})") == ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "other/2", "potential": {}})") == ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "potential":
      {"family": "biased_quartic", "alpha": 1, "a": 1, "gamma": 2}})") ==
        ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "extra": 1, "potential":
      {"family": "biased_quartic", "alpha": 1, "a": 1}})") == ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "potential":
      {"family": "biased_quartic", "alpha": -1, "a": 1}})") == ErrorCode::InvalidSpec);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "potential":
      {"family": "biased_quartic", "alpha": 1, "a": 1}, "oracle_grid": {"x_min": -2}})") ==
        ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "potential":
      {"family": "biased_quartic", "alpha": 1, "a": 1}, "oracle_grid": {"n_points": 10}})") ==
        ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "potential":
      {"family": "polynomial", "coeffs": [0, 0, "x"]}})") == ErrorCode::InvalidConfig);
  CHECK(config_error(R"({"schema": "tunnelkit/1", "potential":
      {"family": "biased_quartic", "alpha": 1, "a": 1},
      "sweep": {"parameter": "V0", "from": 0, "to": 1, "steps": 5}})") ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("oracle command needs a grid") {
  const RunConfig c = parse_config_text(kQuartic);
  try {
    run_oracle(c);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
}

TEST_CASE("fit recovers a known quadratic") {
  std::vector<double> x, d;
  for (int i = 0; i < 9; ++i) {
    x.push_back(0.01 * i);
    d.push_back(2e-5 * std::exp(3.0 * x.back() - 40.0 * x.back() * x.back()));
  }
  const FitResult f = fit_log_quadratic(x, d);
  CHECK(f.c0 == doctest::Approx(2e-5).epsilon(1e-10));
  CHECK(f.c1 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(f.c2 == doctest::Approx(-40.0).epsilon(1e-9));
  CHECK(f.rms_residual < 1e-12);
  CHECK_THROWS_AS(fit_log_quadratic({0.0, 0.1, 0.2, 0.3}, {1.0, 1.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(fit_log_quadratic({0.1, 0.1, 0.1, 0.1, 0.1}, {1.0, 2.0, 3.0, 4.0, 5.0}), Error);
}

TEST_CASE("sweep with a zero-width range is ill-conditioned") {
  RunConfig c = parse_config_text(kSweep);
  c.sweep->to = c.sweep->from;
  try {
    run_sweep(c);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::FitIllConditioned);
  }
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run("analyze " + dir.write("ok.json", kQuartic) + " --out " + dir.file("a.json")) == 0);
  CHECK(run("analyze " + dir.file("missing.json")) == 2);
  CHECK(run("analyze " + dir.write("bad.json", R"({"schema": "tunnelkit/1"})")) == 2);
  CHECK(run("bogus " + dir.file("ok.json")) == 2);
  CHECK(run("analyze " + dir.file("ok.json") + " --format xml") == 2);
  // one well only
  CHECK(run("analyze " + dir.write("single.json", R"({"schema": "tunnelkit/1",
      "potential": {"family": "polynomial", "coeffs": [0, 0, 1]}})")) == 3);
  // a grid far too coarse for the doublet
  CHECK(run("oracle " + dir.write("coarse.json", R"({"schema": "tunnelkit/1",
      "potential": {"family": "biased_quartic", "alpha": 300, "a": 1},
      "oracle_grid": {"n_points": 64}})")) == 4);
  CHECK(run("sweep " + dir.write("flat.json", R"({"schema": "tunnelkit/1",
      "potential": {"family": "biased_quartic", "alpha": 300, "a": 1},
      "sweep": {"parameter": "tilde_eps", "from": 0.5, "to": 0.5, "steps": 9}})")) == 2);
}

TEST_CASE("analyze report") {
  TempDir dir;
  const std::string out = dir.file("a.json");
  REQUIRE(run("analyze " + dir.write("ok.json", kQuartic) + " --out " + out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.contains("well"));
  CHECK(j["splitting"]["delta_E"].get<double>() > 0.0);
  CHECK(j["validity"]["warn_flags"].is_array());
}

TEST_CASE("sweep csv") {
  TempDir dir;
  const std::string cfg = dir.write("sweep.json", kSweep);
  REQUIRE(run("sweep " + cfg + " --out " + dir.file("a.csv")) == 0);
  REQUIRE(run("sweep " + cfg + " --out " + dir.file("b.csv")) == 0);
  const std::string a = slurp(dir.file("a.csv"));
  // byte-identical between runs
  CHECK(a == slurp(dir.file("b.csv")));

  std::istringstream in(a);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == kCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 14);
  }
  CHECK(rows == 9);

  // thread count does not change the bytes
  const std::string one =
      "TUNNELKIT_THREADS=1 \"" + std::string(TUNNELKIT_BIN) + "\" sweep " + cfg + " --out " +
      dir.file("c.csv") + " 2>/dev/null";
  REQUIRE(std::system(one.c_str()) == 0);
  CHECK(slurp(dir.file("c.csv")) == a);
}

TEST_CASE("compare orders the routes") {
  TempDir dir;
  const std::string out = dir.file("cmp.csv");
  REQUIRE(run("compare " + dir.write("cmp.json", kCompare) + " --out " + out) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("method,delta_E,rel_error_vs_oracle", 0) == 0);
  std::vector<std::string> methods;
  while (std::getline(in, line))
    methods.push_back(line.substr(0, line.find(',')));
  CHECK(methods == std::vector<std::string>{"zeroth_order", "first_order", "transcendental",
                                            "oracle"});
}
