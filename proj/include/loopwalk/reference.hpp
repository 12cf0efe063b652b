#pragma once

// Serial versions of the OpenMP kernels. Same arithmetic, same order of accumulation;
// tests require bit-identical output and the benchmarks time one against the other.

#include "loopwalk/analysis.hpp"
#include "loopwalk/dispersion.hpp"
#include "loopwalk/walk.hpp"

namespace lw::serial {

DispersionSpectrum band_structure(const BlochFamily& family, int n_k = 1024);
ErrorBarReport monte_carlo_error_bars(const Experiment& experiment, const MonteCarloOptions& options);
WalkerState apply_coin(const WalkerState& s, const CoinProgram& program, int t);

}  // namespace lw::serial
