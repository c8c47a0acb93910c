#include <iostream>

#include "CLI11.hpp"
#include "pmcf_cli/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = pmcf::cli;
  CLI::App app{"Power mean curvature flow of spacelike graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::CommonOptions common;
  std::string out;
  std::uint64_t seed = 0;
  app.add_option("--out", out, "Output directory (overrides output.dir)");
  app.add_option("--seed", seed, "Seed for randomized initial data");
  app.add_flag("--quiet", common.quiet, "Suppress progress output");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Integrate one configured flow");
  run->add_option("--config", config_path, "Configuration file")->required();

  std::string identity = "all";
  std::string fixture = "minkowski";
  int levels = 4;
  auto* verify = app.add_subcommand("verify", "Check evolution identities along the parametric flow");
  verify->add_option("--identity", identity, "Identity name or 'all'")->capture_default_str();
  verify->add_option("--fixture", fixture, "minkowski, robertson-walker or all")->capture_default_str();
  verify->add_option("--levels", levels, "Refinement levels (>= 3)")->capture_default_str();

  std::string taus;
  auto* sweep = app.add_subcommand("sweep-tau", "Run a descending tau sweep from one configuration");
  sweep->add_option("--config", config_path, "Configuration file")->required();
  sweep->add_option("--taus", taus, "Strictly descending list, e.g. 0.4,0.2,0.1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }
  if (!out.empty()) common.out = out;
  if (app.count("--seed")) common.seed = seed;

  if (*run) return cli::cmd_run(config_path, common, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(identity, fixture, levels, common, std::cout, std::cerr);
  return cli::cmd_sweep_tau(config_path, taus, common, std::cout, std::cerr);
}
