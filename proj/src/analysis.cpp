#include "loopwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace lw {

double similarity(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    if (a < 0 || b < 0) throw std::invalid_argument("analysis: negative entry in distribution");
    s += std::sqrt(a * b);
  }
  return s * s;
}

double similarity(const IntensityRecord& a, const IntensityRecord& b, int step, bool resolved) {
  if (resolved) {
    std::map<std::pair<int, int>, double> p, q;
    auto fill = [&](const IntensityRecord& r, auto& out) {
      for (int x = r.min_x(step); x <= r.max_x(step); ++x)
        for (int d = 0; d < kModes; ++d) out[{x, d}] = r.at(step, x, d);
    };
    fill(a, p);
    fill(b, q);
    return similarity(p, q);
  }
  std::map<int, double> p, q;
  for (int x = a.min_x(step); x <= a.max_x(step); ++x) p[x] = a.position(step, x);
  for (int x = b.min_x(step); x <= b.max_x(step); ++x) q[x] = b.position(step, x);
  return similarity(p, q);
}

SimilarityReport compare_records(const IntensityRecord& a, const IntensityRecord& b, bool resolved) {
  SimilarityReport r;
  r.resolved = resolved;
  const int T = std::min(a.last_step(), b.last_step());
  for (int t = 1; t <= T; ++t) r.per_step.push_back(similarity(a, b, t, resolved));
  r.average = T > 0 ? average_similarity(r.per_step, T) : 1.0;
  return r;
}

double average_similarity(const std::vector<double>& per_step, int T) {
  if (T <= 0) throw std::invalid_argument("analysis: average over T = 0 steps");
  if (T > static_cast<int>(per_step.size())) throw std::invalid_argument("analysis: T exceeds the number of entries");
  double s = 0;
  for (int t = 0; t < T; ++t) s += per_step[t];
  return s / T;
}

double equidistribution_similarity(const SiteRecord& record, int step, const std::vector<int>& support,
                                   bool renormalize) {
  if (support.empty()) throw std::invalid_argument("analysis: empty support");
  const auto& p = record.p.at(step);
  std::vector<double> a, b(support.size(), 1.0 / static_cast<double>(support.size()));
  double total = 0;
  for (int m : support) {
    a.push_back(p.at(m));
    total += p.at(m);
  }
  if (renormalize && total > 0)
    for (double& v : a) v /= total;
  return similarity(a, b);
}

std::vector<Revival> find_revivals(const SiteRecord& record, double tol) {
  std::vector<Revival> out;
  if (record.steps() == 0) return out;
  const auto& p0 = record.p[0];
  const int M = record.nodes();
  std::vector<double> rolled(M);
  for (int t = 1; t < record.steps(); ++t) {
    for (int s = 0; s < M; ++s) {
      for (int m = 0; m < M; ++m) rolled[(m + s) % M] = p0[m];
      if (similarity(record.p[t], rolled) >= 1 - tol) {
        out.push_back({t, s, s == 0 ? RevivalKind::perfect : RevivalKind::shifted});
        break;
      }
    }
  }
  return out;
}

namespace mc {

namespace {

std::string key_of(const OpticalElement& e, const std::string& slot) { return e.label.empty() ? slot : e.label; }

template <class F>
void visit_keys(const CoinSetting& s, F&& f) {
  auto arm_keys = [&](const ArmSetting& a, const std::string& name) {
    for (std::size_t i = 0; i < a.plates.size(); ++i) f(key_of(a.plates[i], name + ".plate" + std::to_string(i)));
    if (!a.eom_label.empty()) f(a.eom_label);
  };
  arm_keys(s.arm_a, "arm_a");
  arm_keys(s.arm_b, "arm_b");
  for (std::size_t i = 0; i < s.loop.size(); ++i) f(key_of(s.loop[i], "loop" + std::to_string(i)));
}

CoinSetting perturb(const CoinSetting& s, const std::map<std::string, double>& delta) {
  CoinSetting out = s;
  auto shift = [&](Degrees& d, const std::string& key) {
    auto it = delta.find(key);
    if (it != delta.end()) d.value += it->second;
  };
  auto arm = [&](ArmSetting& a, const std::string& name) {
    for (std::size_t i = 0; i < a.plates.size(); ++i)
      shift(a.plates[i].setting, key_of(a.plates[i], name + ".plate" + std::to_string(i)));
    if (!a.eom_label.empty()) shift(a.eom_phase, a.eom_label);
  };
  arm(out.arm_a, "arm_a");
  arm(out.arm_b, "arm_b");
  for (std::size_t i = 0; i < out.loop.size(); ++i)
    shift(out.loop[i].setting, key_of(out.loop[i], "loop" + std::to_string(i)));
  return out;
}

double draw(std::mt19937_64& rng, double range, PerturbationLaw law) {
  if (range == 0.0) return 0.0;
  if (law == PerturbationLaw::uniform) return std::uniform_real_distribution<double>(-range, range)(rng);
  std::normal_distribution<double> g(0.0, range / 2);
  for (;;) {
    double x = g(rng);
    if (std::abs(x) <= range) return x;
  }
}

}  // namespace

std::vector<std::string> element_keys(const CoinProgram& program) {
  std::set<std::string> keys;
  program.for_each_setting([&](const CoinSetting& s) { visit_keys(s, [&](const std::string& k) { keys.insert(k); }); });
  return {keys.begin(), keys.end()};
}

Draw draw_sample(const std::vector<std::string>& keys, const MonteCarloOptions& options, int sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(sample), 0x5eed5eedu};
  std::mt19937_64 rng(seq);
  Draw d;
  for (const auto& k : keys) d.angle_delta[k] = draw(rng, options.angle_error_deg, options.law);
  for (int m = 0; m < kModes; ++m) d.efficiency[m] = 1.0 + draw(rng, options.efficiency_error, options.law);
  return d;
}

IntensityRecord normalized(const IntensityRecord& r) {
  IntensityRecord out = r;
  for (int t = 0; t < out.size(); ++t) {
    double tot = out.total(t);
    if (tot <= 0) continue;
    for (auto& v : out.step(t).values)
      for (double& x : v) x /= tot;
  }
  return out;
}

IntensityRecord sample_record(const Experiment& experiment, const Draw& draw, bool renormalize) {
  CoinProgram program = experiment.program.transformed(
      [&](const CoinSetting& s) { return perturb(s, draw.angle_delta); });
  IntensityRecord rec = evolve(experiment.initial, program, experiment.steps);
  for (int t = 0; t < rec.size(); ++t)
    for (auto& v : rec.step(t).values)
      for (int m = 0; m < kModes; ++m) v[m] *= draw.efficiency[m];
  return renormalize ? normalized(rec) : rec;
}

void accumulate(const IntensityRecord& sample, const IntensityRecord& reference, std::vector<double>& sum2) {
  std::size_t idx = 0;
  for (int t = 0; t < reference.size(); ++t) {
    const auto& r = reference.step(t);
    const auto& s = sample.step(t);
    if (r.min_x != s.min_x || r.values.size() != s.values.size())
      throw std::logic_error("analysis: perturbed run does not align with the reference");
    for (std::size_t i = 0; i < r.values.size(); ++i)
      for (int m = 0; m < kModes; ++m, ++idx) {
        const double d = s.values[i][m] - r.values[i][m];
        sum2[idx] += d * d;
      }
  }
}

ErrorBarReport finish(const Experiment& experiment, const MonteCarloOptions& options, IntensityRecord reference,
                      const std::vector<double>& sum2) {
  ErrorBarReport rep;
  rep.reference_id = experiment.id;
  rep.options = options;
  rep.sigma = reference;
  std::size_t idx = 0;
  for (int t = 0; t < rep.sigma.size(); ++t)
    for (auto& v : rep.sigma.step(t).values)
      for (int m = 0; m < kModes; ++m, ++idx) v[m] = std::sqrt(sum2[idx] / options.samples);

  for (int t = 0; t < reference.size(); ++t) {
    const auto& q = reference.step(t).values;
    const auto& sg = rep.sigma.step(t).values;
    double overlap = 0;
    for (const auto& v : q)
      for (double x : v) overlap += x;  // sum sqrt(p q) at p = q
    double var = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (int m = 0; m < kModes; ++m)
        if (q[i][m] > 0) {
          const double grad = overlap;  // overlap * sqrt(q/p) at p = q
          var += grad * grad * sg[i][m] * sg[i][m];
        }
    rep.similarity_sigma.push_back(std::sqrt(var));
  }
  rep.reference = std::move(reference);
  return rep;
}

}  // namespace mc

ErrorBarReport monte_carlo_error_bars(const Experiment& experiment, const MonteCarloOptions& options) {
  if (options.samples <= 0) throw std::invalid_argument("analysis: n_samples must be positive");
  const auto keys = mc::element_keys(experiment.program);
  mc::Draw ideal;
  ideal.efficiency.fill(1.0);
  IntensityRecord reference = mc::sample_record(experiment, ideal, options.renormalize);

  std::size_t bins = 0;
  for (int t = 0; t < reference.size(); ++t) bins += reference.step(t).values.size() * kModes;
  std::vector<double> sum2(bins, 0.0);

  // samples computed in parallel per chunk, folded in sample order
  constexpr int kChunk = 64;
  std::vector<IntensityRecord> chunk(kChunk);
  for (int base = 0; base < options.samples; base += kChunk) {
    const int n = std::min(kChunk, options.samples - base);
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < n; ++j)
      chunk[j] = mc::sample_record(experiment, mc::draw_sample(keys, options, base + j), options.renormalize);
    for (int j = 0; j < n; ++j) mc::accumulate(chunk[j], reference, sum2);
  }
  return mc::finish(experiment, options, std::move(reference), sum2);
}

}  // namespace lw
