#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bcs/boundary3d.hpp"
#include "commands.hpp"

using namespace bcs;
using cli::Json;

namespace {

std::set<std::string> failed(const cli::Outcome& o) {
  std::set<std::string> names;
  for (const auto& c : o.checks)
    if (!c.passed) names.insert(c.name);
  return names;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

int run(const std::string& cmd, const std::string& cfg_text, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  cli::Options opt;
  opt.config_path = write_temp("bcs_cli_test_" + cmd + ".json", cfg_text);
  std::ostringstream out, err;
  const int code = cli::execute(cmd, opt, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("table1 passes all cells") {
    const auto o = cli::run_table1(Json::object(), cli::Options{});
    CHECK(o.checks.size() == 16);
    CHECK(failed(o).empty());
    CHECK(o.report["status"] == "pass");
  }

  TEST_CASE("table1 detects a sign error in t3") {
    auto mutated = [](double x, int j) { return j == 3 ? -boundary::t_j(x, 3) : boundary::t_j(x, j); };
    const auto o = cli::run_table1(Json::object(), cli::Options{}, mutated);
    const std::set<std::string> expected{"t3(0)", "t3''(0)", "m3_dirichlet(0)", "m3_neumann(0)", "m3_dirichlet''(0)"};
    CHECK(failed(o) == expected);
    CHECK(!o.enforced_checks_pass());
  }

  TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(cli::run_table1(Json{{"tolerance", 1e-6}}, cli::Options{}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_potential(Json{{"type", "gaussian"}, {"a", 1}, {"ell", 1}, {"width", 2}}), cli::ConfigError);
    CHECK(run("table1", R"({"outputs": {"pdf": "x"}})") == cli::kExitConfig);
  }

  TEST_CASE("invalid values map to the config exit code") {
    CHECK(run("m3-profile", R"({"step": 0})") == cli::kExitConfig);
    CHECK(run("tc0", R"({"potential": {"type": "gaussian", "a": 1, "ell": 1}, "lambda": []})") == cli::kExitConfig);
    CHECK(run("vmu-spectrum", R"({"potential": {"type": "gaussian", "a": 1, "ell": 1}, "l_max": 0})") ==
          cli::kExitConfig);
    CHECK(run("criterion", R"({"potential": {"type": "cubic"}})") == cli::kExitConfig);
    CHECK(run("criterion", R"({"command": "tc0", "potential": {"type": "gaussian", "a": 1, "ell": 1}})") ==
          cli::kExitConfig);
    CHECK(run("table1", "{ not json") == cli::kExitConfig);
    std::string err;
    run("vmu-spectrum", R"({"potential": {"type": "gaussian", "a": 1, "ell": 1}, "l_max": 0})", nullptr, &err);
    CHECK(err.find("insufficient data") != std::string::npos);
  }

  TEST_CASE("m3-profile table") {
    const auto o = cli::run_m3_profile(Json{{"bc", "neumann"}}, cli::Options{});
    std::istringstream in(o.csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 402);  // header plus 401 samples
    CHECK(o.csv.rfind("x,m3\r\n", 0) == 0);
    CHECK(o.enforced_checks_pass());
  }

  TEST_CASE("reports are reproducible") {
    const std::string cfg = R"({"potential": {"type": "exponential", "a": 1, "ell": 0.5}, "mu_sweep": [0.5, 1, 2]})";
    std::string a, b;
    CHECK(run("criterion", cfg, &a) == cli::kExitOk);
    CHECK(run("criterion", cfg, &b) == cli::kExitOk);
    CHECK(a == b);
    const Json j = Json::parse(a);
    CHECK(j.begin().key() == "tool");
    CHECK(j["command"] == "criterion");
    CHECK(!j.contains("wall_time_s"));
  }

  TEST_CASE("thread count does not change results") {
    const Json cfg{{"potential", {{"type", "gaussian"}, {"a", 1.0}, {"ell", 1.0}}}, {"lambda", {0.6, 0.5}}};
    cli::Options one, two;
    two.threads = 2;
    CHECK(cli::run_tc0(cfg, one).csv == cli::run_tc0(cfg, two).csv);
  }

  TEST_CASE("number formatting") {
    CHECK(cli::format_double(0.1) == "0.10000000000000001");
    CHECK(cli::format_double(std::nan("")) == "NaN");
    CHECK(cli::format_double(-INFINITY) == "-Infinity");
  }

  TEST_CASE("vmu spectrum reports every channel") {
    const auto o =
        cli::run_vmu_spectrum(Json{{"potential", {{"type", "gaussian"}, {"a", 1.0}, {"ell", 1.0}}}, {"l_max", 3}}, {});
    CHECK(o.report["results"]["eigenvalues"].size() == 4);
  }
}
