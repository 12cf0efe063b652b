#include "loopwalk/reference.hpp"

namespace lw::serial {

DispersionSpectrum band_structure(const BlochFamily& family, int n_k) {
  if (n_k < 64) throw std::invalid_argument("dispersion: n_k must be at least 64");
  const int n_tot = n_k + 2 * DispersionSpectrum::kPad;
  std::vector<LocalEigen> samples(n_tot);
  for (int i = 0; i < n_tot; ++i) samples[i] = eig_at(family, padded_k(n_k, i));
  return assemble_spectrum(family, n_k, std::move(samples));
}

ErrorBarReport monte_carlo_error_bars(const Experiment& experiment, const MonteCarloOptions& options) {
  if (options.samples <= 0) throw std::invalid_argument("analysis: n_samples must be positive");
  const auto keys = mc::element_keys(experiment.program);
  mc::Draw ideal;
  ideal.efficiency.fill(1.0);
  IntensityRecord reference = mc::sample_record(experiment, ideal, options.renormalize);
  std::size_t bins = 0;
  for (int t = 0; t < reference.size(); ++t) bins += reference.step(t).values.size() * kModes;
  std::vector<double> sum2(bins, 0.0);
  for (int s = 0; s < options.samples; ++s)
    mc::accumulate(mc::sample_record(experiment, mc::draw_sample(keys, options, s), options.renormalize), reference,
                   sum2);
  return mc::finish(experiment, options, std::move(reference), sum2);
}

WalkerState apply_coin(const WalkerState& s, const CoinProgram& program, int t) {
  WalkerState out = s;
  auto& sites = out.sites();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].isZero(0.0)) continue;
    sites[i] = program.coin(t, s.origin() + static_cast<int>(i)) * sites[i];
  }
  return out;
}

}  // namespace lw::serial
