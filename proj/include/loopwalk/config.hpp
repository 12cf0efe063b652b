#pragma once

#include "loopwalk/analysis.hpp"
#include "loopwalk/graphs.hpp"
#include "loopwalk/optics.hpp"
#include "loopwalk/walk.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace lw {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { line, circle, figure_eight, dispersion, decompose, errorbars };
const char* kind_name(ExperimentKind k);

struct CoinSpec {
  std::optional<CoinSetting> setting;
  std::optional<Unitary4> matrix;

  Unitary4 realize() const;
  CoinProgram program() const;
};

struct InitialSpec {
  Direction direction = Direction::ccw;
  Polarization polarization = Polarization::H;
  int position = 0;

  WalkerState state() const { return make_initial(direction, polarization, position); }
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::line;
  CoinSpec coin;
  InitialSpec initial;
  int steps = 25;
  std::uint64_t seed = 1;
  Trace trace = Trace::full;

  CircleSpec circle;
  FigureEightSpec figure_eight;

  std::optional<Unitary4> target;  // decompose
  double rank_tol = kRankTol;

  int n_k = 1024;
  double merge_tol = 1e-4;
  double gap_tol = 1e-9;

  ExperimentKind geometry = ExperimentKind::line;  // errorbars
  MonteCarloOptions monte_carlo;

  double revival_tol = 1e-6;

  std::string out_path;
  std::string format = "csv";
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumerical = 3 };

// runs one subcommand, writing results to `out` and diagnostics to `err`
int run(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

// 17 significant digits
std::string format_number(double v);

}  // namespace lw
