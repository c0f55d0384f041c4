#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcs/boundary3d.hpp"
#include "bcs/potentials.hpp"

namespace bcs::cli {

using Json = nlohmann::ordered_json;

// Invalid or unknown configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::string> config_path;
  std::optional<std::string> out;  // CSV table path; overrides outputs.csv
  std::optional<double> tol;
  int threads = 1;
  bool timing = false;
};

struct Check {
  std::string name;
  bool passed = true;
  bool enforced = true;  // false: observational, reported as a warning
  std::string detail;
};

struct Outcome {
  Json report;
  std::string csv;  // empty when the command has no table
  std::vector<Check> checks;

  bool enforced_checks_pass() const;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

const std::vector<std::string>& command_names();

Json load_config(const std::string& path);
RadialPotential parse_potential(const Json& spec);

using TjFunction = std::function<double(double, int)>;

// Each runner validates `cfg` against its schema before computing.
Outcome run_table1(const Json& cfg, const Options& opt, const TjFunction& tj = boundary::t_j);
Outcome run_m3_profile(const Json& cfg, const Options& opt);
Outcome run_criterion(const Json& cfg, const Options& opt);
Outcome run_tc0(const Json& cfg, const Options& opt);
Outcome run_dt_growth(const Json& cfg, const Options& opt);
Outcome run_vmu_spectrum(const Json& cfg, const Options& opt);

Outcome run_command(const std::string& command, const Json& cfg, const Options& opt);

// Loads the config, runs, writes outputs; returns the process exit code.
int execute(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err);

std::string format_double(double x);

}  // namespace bcs::cli
