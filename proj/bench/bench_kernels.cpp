#include "loopwalk/reference.hpp"

#include <benchmark/benchmark.h>

using namespace lw;

namespace {

CoinSetting two_plate() {
  return CoinSetting{arm({qwp(27, "a1"), qwp(0, "a2")}), arm({qwp(27, "b1"), qwp(0, "b2")}), {hwp(20, "loop")}};
}

Experiment experiment() {
  Experiment e;
  e.id = "bench";
  e.initial = make_initial(Direction::ccw, Polarization::D, 0);
  e.program = CoinProgram::uniform(two_plate());
  e.steps = 30;
  return e;
}

WalkerState wide_state(int half) {
  WalkerState s;
  for (int x = -half; x <= half; ++x) s.set(x, Vec4(1, 0.5, cd(0, 0.25), -0.5).normalized());
  return s;
}

void BM_BandsParallel(benchmark::State& st) {
  BlochFamily f = coin_family(two_plate().realize());
  for (auto _ : st) benchmark::DoNotOptimize(band_structure(f, static_cast<int>(st.range(0))));
}
void BM_BandsSerial(benchmark::State& st) {
  BlochFamily f = coin_family(two_plate().realize());
  for (auto _ : st) benchmark::DoNotOptimize(serial::band_structure(f, static_cast<int>(st.range(0))));
}

void BM_MonteCarloParallel(benchmark::State& st) {
  Experiment e = experiment();
  MonteCarloOptions o;
  o.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(monte_carlo_error_bars(e, o));
}
void BM_MonteCarloSerial(benchmark::State& st) {
  Experiment e = experiment();
  MonteCarloOptions o;
  o.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(serial::monte_carlo_error_bars(e, o));
}

void BM_CoinParallel(benchmark::State& st) {
  WalkerState s = wide_state(static_cast<int>(st.range(0)));
  CoinProgram p = CoinProgram::uniform(two_plate());
  for (auto _ : st) benchmark::DoNotOptimize(apply_coin(s, p, 0));
}
void BM_CoinSerial(benchmark::State& st) {
  WalkerState s = wide_state(static_cast<int>(st.range(0)));
  CoinProgram p = CoinProgram::uniform(two_plate());
  for (auto _ : st) benchmark::DoNotOptimize(serial::apply_coin(s, p, 0));
}

}  // namespace

BENCHMARK(BM_BandsParallel)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandsSerial)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoinParallel)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CoinSerial)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
