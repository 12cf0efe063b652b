#pragma once

#include "loopwalk/graphs.hpp"
#include "loopwalk/walk.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lw {

// (sum sqrt(p q))^2 over aligned entries
double similarity(std::span<const double> p, std::span<const double> q);

template <class Key>
double similarity(const std::map<Key, double>& p, const std::map<Key, double>& q) {
  double s = 0;
  for (const auto& [k, v] : p) {
    if (v < 0) throw std::invalid_argument("analysis: negative entry in distribution");
    auto it = q.find(k);
    if (it == q.end()) continue;
    if (it->second < 0) throw std::invalid_argument("analysis: negative entry in distribution");
    s += std::sqrt(v * it->second);
  }
  for (const auto& [k, v] : q)
    if (v < 0) throw std::invalid_argument("analysis: negative entry in distribution");
  return s * s;
}

// resolved: keyed by (x, mode); otherwise by x only
double similarity(const IntensityRecord& a, const IntensityRecord& b, int step, bool resolved);

struct SimilarityReport {
  std::vector<double> per_step;  // entry t-1 holds S(t), t = 1..T
  double average = 0;
  bool resolved = false;
};

SimilarityReport compare_records(const IntensityRecord& a, const IntensityRecord& b, bool resolved);
double average_similarity(const std::vector<double>& per_step, int T);

double equidistribution_similarity(const SiteRecord& record, int step, const std::vector<int>& support,
                                   bool renormalize = false);

enum class RevivalKind { perfect, shifted };

struct Revival {
  int step;
  int shift;  // p_t[m] = p_0[m - shift]
  RevivalKind kind;
};

std::vector<Revival> find_revivals(const SiteRecord& record, double tol = 1e-6);

enum class PerturbationLaw { uniform, truncated_normal };

struct MonteCarloOptions {
  int samples = 1000;
  double efficiency_error = 0.025;  // relative, per internal mode
  double angle_error_deg = 1.0;     // per physical element
  PerturbationLaw law = PerturbationLaw::uniform;
  bool renormalize = true;
  std::uint64_t seed = 1;
};

struct Experiment {
  std::string id;
  WalkerState initial;
  CoinProgram program;
  int steps = 0;
};

struct ErrorBarReport {
  std::string reference_id;
  MonteCarloOptions options;
  IntensityRecord reference;           // ideal run (renormalized per step when options.renormalize)
  IntensityRecord sigma;               // per (step, x, mode) standard deviation from the reference
  std::vector<double> similarity_sigma;  // per step, propagated
};

ErrorBarReport monte_carlo_error_bars(const Experiment& experiment, const MonteCarloOptions& options);

// pieces shared with the serial reference implementation
namespace mc {
std::vector<std::string> element_keys(const CoinProgram& program);
struct Draw {
  std::map<std::string, double> angle_delta;
  std::array<double, kModes> efficiency;
};
Draw draw_sample(const std::vector<std::string>& keys, const MonteCarloOptions& options, int sample);
IntensityRecord sample_record(const Experiment& experiment, const Draw& draw, bool renormalize);
IntensityRecord normalized(const IntensityRecord& r);
void accumulate(const IntensityRecord& sample, const IntensityRecord& reference, std::vector<double>& sum2);
ErrorBarReport finish(const Experiment& experiment, const MonteCarloOptions& options, IntensityRecord reference,
                      const std::vector<double>& sum2);
}  // namespace mc

}  // namespace lw
