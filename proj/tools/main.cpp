#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerics for BCS critical temperatures and the half-space boundary criterion"};
  app.require_subcommand(1);
  app.fallthrough();

  bcs::cli::Options opt;
  std::string config, out;
  double tol = 0.0;
  app.add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out, "CSV output path");
  app.add_option("--tol", tol, "override the command's primary tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::Range(1, 1024));
  app.add_flag("--timing", opt.timing, "include wall time in the JSON report");

  for (const auto& name : bcs::cli::command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bcs::cli::kExitConfig;
  }
  if (!config.empty()) opt.config_path = config;
  if (!out.empty()) opt.out = out;
  if (app.count("--tol") > 0) opt.tol = tol;

  const std::string command = app.get_subcommands().front()->get_name();
  return bcs::cli::execute(command, opt, std::cout, std::cerr);
}
