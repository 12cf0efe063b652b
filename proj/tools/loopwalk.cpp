#include "loopwalk/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"loopwalk: four-mode loop quantum walk simulator"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path, format;
  int steps = -1;
  long long seed = -1;

  for (const char* name : {"simulate", "dispersion", "decompose", "circle", "figure-eight", "errorbars", "revivals"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--steps", steps, "override the step count")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "override the random seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_path, "write results here instead of stdout");
    sub->add_option("--format", format, "csv or table")->check(CLI::IsMember({"csv", "table"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : lw::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  lw::RunConfig cfg;
  try {
    cfg = lw::load_config(config_path);
  } catch (const lw::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lw::kExitConfig;
  } catch (const lw::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lw::kExitNumerical;
  }
  if (steps >= 0) cfg.steps = steps;
  if (seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.monte_carlo.seed = cfg.seed;
  }
  if (!format.empty()) cfg.format = format;
  if (!out_path.empty()) cfg.out_path = out_path;

  if (cfg.out_path.empty()) return lw::run(command, cfg, std::cout, std::cerr);
  std::ofstream out(cfg.out_path);
  if (!out) {
    std::cerr << "error: cannot write '" << cfg.out_path << "'\n";
    return lw::kExitConfig;
  }
  return lw::run(command, cfg, out, std::cerr);
}
