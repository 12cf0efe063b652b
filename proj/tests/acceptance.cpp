// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "loopwalk/analysis.hpp"
#include "loopwalk/dispersion.hpp"
#include "loopwalk/graphs.hpp"
#include "loopwalk/synthesis.hpp"
#include "loopwalk/walk.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace lw;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> body;
};

CoinSetting hadamard_setting() { return CoinSetting{arm({qwp(45)}), arm({qwp(45)}), {hwp(22.5)}}; }
CoinSetting crossing_setting() { return CoinSetting{arm({qwp(12)}), arm({qwp(12)}), {hwp(27)}}; }
CoinSetting repelling_setting() { return CoinSetting{arm({qwp(27), qwp(0)}), arm({qwp(27), qwp(0)}), {hwp(20)}}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << fmt("%.5f", v[i]);
  return s.str() + "}";
}

Vec4 random_vec4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec4 v;
  for (int i = 0; i < 4; ++i) v(i) = cd(g(rng), g(rng));
  return v.normalized();
}

// local maxima of the position distribution on the occupied parity class
std::vector<int> lobe_positions(const IntensityRecord& rec, int t, double frac) {
  std::vector<int> xs;
  std::vector<double> p;
  for (int x = rec.min_x(t); x <= rec.max_x(t); ++x)
    if (((x - t) % 2 + 2) % 2 == 0) {
      xs.push_back(x);
      p.push_back(rec.position(t, x));
    }
  const double peak = *std::max_element(p.begin(), p.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double l = i > 0 ? p[i - 1] : -1, r = i + 1 < p.size() ? p[i + 1] : -1;
    if (p[i] > l && p[i] >= r && p[i] > frac * peak) out.push_back(xs[i]);
  }
  return out;
}

double slope(const std::vector<double>& t, const std::vector<double>& y) {
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < t.size(); ++i) mt += t[i], my += y[i];
  mt /= t.size();
  my /= t.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < t.size(); ++i) num += (t[i] - mt) * (y[i] - my), den += (t[i] - mt) * (t[i] - mt);
  return num / den;
}

Outcome hadamard_wavefronts() {
  WavefrontSet w = wavefront_speeds(band_structure(hadamard_setting().realize()));
  const double s = 1 / std::sqrt(2.0);
  bool ok = w.speeds.size() == 2 && std::abs(w.speeds[0] + s) < 1e-6 && std::abs(w.speeds[1] - s) < 1e-6;
  return {ok, "speeds " + list(w.speeds)};
}

Outcome repelling_speeds() {
  WavefrontSet w = wavefront_speeds(band_structure(repelling_setting().realize()));
  const std::vector<double> want{-0.5538, -0.1655, 0.1655, 0.5538};
  bool ok = w.speeds.size() == 4;
  for (std::size_t i = 0; ok && i < 4; ++i) ok = std::abs(w.speeds[i] - want[i]) <= 1e-3;
  return {ok, "speeds " + list(w.speeds)};
}

Outcome crossing_classification() {
  auto a = classify_crossings(band_structure(crossing_setting().realize()));
  auto b = classify_crossings(band_structure(repelling_setting().realize()));
  double min_a = 10, min_b = 10;
  for (const auto& g : a) min_a = std::min(min_a, g.gap);
  for (const auto& g : b) min_b = std::min(min_b, g.gap);
  return {min_a < 1e-9 && min_b >= 1e-9,
          fmt("smallest gap %.3g (single-plate arms), %.3g (two-plate arms)", min_a, min_b)};
}

Outcome lobes() {
  const double fast = wavefront_speeds(band_structure(repelling_setting().realize())).speeds.back();
  IntensityRecord rec =
      evolve(make_initial(Direction::ccw, Polarization::D, 0), CoinProgram::uniform(repelling_setting()), 50);
  std::vector<double> ts, left, right;
  for (int t = 20; t <= 50; ++t) {
    auto m = lobe_positions(rec, t, 0.05);
    ts.push_back(t);
    left.push_back(m.front());
    right.push_back(m.back());
  }
  const double sl = slope(ts, left), sr = slope(ts, right);
  const auto n15 = lobe_positions(rec, 15, 0.05).size(), n50 = lobe_positions(rec, 50, 0.05).size();
  bool drift = std::abs(sr - fast) <= 0.03 && std::abs(-sl - fast) <= 0.03;
  bool ok = drift && n15 == 3 && n50 == 4;
  return {ok, fmt("outer drift %+.4f/%+.4f vs %.4f; ", sl, sr, fast) + "maxima at step 15: " + std::to_string(n15) +
                  ", at step 50: " + std::to_string(n50) + " (want 3, 4)"};
}

Outcome universal_factorization() {
  std::mt19937_64 rng(2024);
  double worst_res = 0, worst_unit = 0;
  auto check = [&](const Unitary4& c) {
    UniversalFactorization f = factor_universal(c);
    worst_res = std::max(worst_res, f.residual(c));
    for (const OneTripFactors* g : {&f.first, &f.second})
      for (const Unitary2* u : {&g->arm_a, &g->arm_b, &g->loop_cw, &g->loop_ccw})
        worst_unit = std::max(worst_unit, unitarity_error(u->matrix()));
    return f.branch;
  };
  int generic = 0;
  for (int i = 0; i < 1000; ++i) generic += check(haar_unitary<4>(rng)) == FactorBranch::generic;
  // directed branches
  bool branches = check(coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng))) == FactorBranch::block_diagonal;
  branches = branches && check(grover_coin()) == FactorBranch::unit_singular_value;
  Mat4 off = Mat4::Zero();
  off.topRightCorner<2, 2>() = haar_unitary<2>(rng).matrix();
  off.bottomLeftCorner<2, 2>() = haar_unitary<2>(rng).matrix();
  branches = branches && check(Unitary4(off)) == FactorBranch::generic;
  Mat4 mix = Mat4::Identity();
  mix(1, 1) = mix(2, 2) = std::cos(0.4);
  mix(1, 2) = -std::sin(0.4);
  mix(2, 1) = std::sin(0.4);
  Mat4 l = coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng)).matrix();
  branches = branches && check(Unitary4(l * mix)) == FactorBranch::unit_singular_value;
  check(fourier_coin());
  bool ok = worst_res <= 1e-9 && worst_unit <= 1e-10 && branches;
  return {ok, fmt("max residual %.2g, max block unitarity error %.2g, %g/1000 generic, directed branches ", worst_res,
                  worst_unit, generic) +
                  (branches ? "ok" : "WRONG")};
}

Outcome one_trip_round_trip() {
  std::mt19937_64 rng(7);
  double worst = 0;
  int passed = 0;
  for (int i = 0; i < 1000; ++i) {
    Unitary4 c = full_coin(haar_unitary<2>(rng), haar_unitary<2>(rng), haar_unitary<2>(rng));
    if (!one_trip_test(c).decomposable) continue;
    ++passed;
    worst = std::max(worst, max_abs_diff(one_trip_reconstruct(c).compose().matrix(), c.matrix()));
  }
  bool grover = one_trip_test(grover_coin()).decomposable;
  return {passed == 1000 && worst <= 1e-9 && !grover,
          fmt("%g/1000 decomposable, max residual %.2g, Grover ", passed, worst) + (grover ? "passes (wrong)" : "rejected")};
}

Outcome three_step() {
  std::mt19937_64 rng(99);
  double worst = 0;
  for (const Unitary4& c : {grover_coin(), fourier_coin()}) {
    ThreeStepSchedule s = three_step_schedule(c);
    CoinProgram once = CoinProgram::uniform(Unitary4::trusted(s.phase * c.matrix()));
    for (int i = 0; i < 100; ++i) {
      WalkerState init;
      int x = std::uniform_int_distribution<int>(-20, 20)(rng);
      init.set(x, random_vec4(rng));
      WalkerState got = propagate(init, s.program, 3);
      WalkerState want = apply_step(apply_coin(init, once, 0));
      for (int y = x - 3; y <= x + 3; ++y) worst = std::max(worst, (got.at(y) - want.at(y)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-9, fmt("max amplitude deviation %.2g over 200 states", worst)};
}

Outcome circle_integrity() {
  std::mt19937_64 rng(5);
  double leak = 0, norm = 0;
  for (int n : {4, 8, 10, 16})
    for (Flavor f : {Flavor::NonMixing, Flavor::HadamardLike}) {
      CircleSpec spec{n, -2, f};
      GraphProgram g = circle_program(spec);
      WalkerState init;
      init.set(spec.left_end + 1, random_vec4(rng));
      IntensityRecord rec = evolve(init, g.program, 25);
      SiteRecord sr = map_sites(g.sites, rec);
      for (int t = 0; t < sr.steps(); ++t) {
        leak = std::max(leak, sr.leak[t]);
        norm = std::max(norm, std::abs(rec.total(t) - 1));
      }
    }
  return {leak <= 1e-12 && norm <= 1e-10, fmt("max leakage %.2g, max norm drift %.2g", leak, norm)};
}

SiteRecord circle_record(const CircleSpec& spec, int start, int steps) {
  GraphProgram g = circle_program(spec);
  return map_sites(g.sites, evolve(make_initial(Direction::ccw, Polarization::H, start), g.program, steps));
}

Outcome revivals() {
  auto eight = circle_record(CircleSpec{8, -2, Flavor::HadamardLike}, -1, 24);
  auto four = circle_record(CircleSpec{4, 0, Flavor::HadamardLike}, 1, 8);
  bool p24 = false, s4 = false, p8 = false;
  for (const auto& r : find_revivals(eight)) p24 = p24 || (r.step == 24 && r.kind == RevivalKind::perfect);
  for (const auto& r : find_revivals(four)) {
    s4 = s4 || (r.step == 4 && r.shift == 2 && r.kind == RevivalKind::shifted);
    p8 = p8 || (r.step == 8 && r.kind == RevivalKind::perfect);
  }
  std::string d = std::string("8 sites: perfect at 24 ") + (p24 ? "yes" : "no") + "; 4 sites: shifted(2) at 4 " +
                  (s4 ? "yes" : "no") + ", perfect at 8 " + (p8 ? "yes" : "no");
  return {p24 && s4 && p8, d};
}

Outcome equidistribution() {
  auto sr = circle_record(CircleSpec{8, -2, Flavor::HadamardLike}, -1, 11);
  double s = equidistribution_similarity(sr, 11, {1, 3, 5, 7});
  return {s >= 0.99, fmt("similarity to flat at step 11: %.6f", s)};
}

Outcome partial_reversal() {
  const double r = 1 / std::sqrt(2.0);
  CoinSetting s{arm({qwp(45)}), arm({qwp(0)}), {hwp(22.5)}};
  IntensityRecord rec = evolve(make_initial(Direction::ccw, Polarization::A, 0), CoinProgram::uniform(s), 22);
  Effective2DRecord two = effective_2d_evolve(Effective2DState::localized(0, Vec2(r, -r)), hadamard(), 22);
  double err = 0;
  for (int t = 0; t <= 22; ++t)
    for (int x = -t; x <= t; ++x) err = std::max(err, std::abs(rec.position(t, x) - two.position(t, x)));
  return {err <= 1e-10, fmt("max deviation from the two-mode Hadamard walk %.2g", err)};
}

Outcome split_step() {
  std::mt19937_64 rng(12);
  auto su2 = [&]() {
    Mat2 m = haar_unitary<2>(rng).matrix();
    return Mat2(m / std::sqrt(m.determinant()));
  };
  int two = 0;
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    Mat2 c1 = su2(), c2 = su2();
    SplitStepParams p = SplitStepParams::from_coins(c1, c2);
    SplitStepBands bands = split_step_bands(p, 1024);
    DispersionSpectrum spec = band_structure(split_step_family(c1, c2), 1024);
    WavefrontSet w = wavefront_speeds(spec);
    if (bands.speeds.size() == 2 && w.speeds.size() == 2) ++two;
    for (int j = 0; j < spec.n_k(); ++j) {
      double c = split_step_cos(p, spec.k(j));
      for (int b = 0; b < 2; ++b) worst = std::max(worst, std::abs(std::cos(spec.omega(b, j)) - c));
    }
  }
  return {two == 200 && worst <= 1e-9, fmt("%g/200 with two speeds, max band mismatch %.2g", two, worst)};
}

Outcome eight_wavefronts() {
  std::mt19937_64 rng(13);
  std::size_t most = 0;
  for (int i = 0; i < 1000; ++i) most = std::max(most, wavefront_speeds(band_structure(haar_unitary<4>(rng))).speeds.size());
  return {most <= 8, fmt("largest speed count %g", static_cast<double>(most))};
}

Outcome balanced_coin() {
  const cd i(0, 1);
  Mat4 tab;
  tab << 1, -i, 1, i, -i, 1, i, 1, 1, i, 1, -i, i, 1, -i, 1;
  tab /= 2;
  Mat4 c = full_coin(h_prime(), h_prime(), h_prime()).matrix();
  Mat4 d = Eigen::Vector4cd(1, 1, -1, -1).asDiagonal();
  double direct = max_abs_diff(c, tab), gauged = max_abs_diff(d * c * d, tab);
  return {direct <= 1e-12, fmt("max entry deviation %.3g (after diag(1,1,-1,-1) conjugation %.2g)", direct, gauged)};
}

Outcome monte_carlo() {
  Experiment e;
  e.id = "two-plate arms, ccD, 15 steps";
  e.initial = make_initial(Direction::ccw, Polarization::D, 0);
  e.program = CoinProgram::uniform(repelling_setting());
  e.steps = 15;
  MonteCarloOptions o;
  o.samples = 1000;
  o.seed = 17;
  ErrorBarReport a = monte_carlo_error_bars(e, o), b = monte_carlo_error_bars(e, o);
  bool identical = a.similarity_sigma == b.similarity_sigma;
  for (int t = 0; identical && t < a.sigma.size(); ++t) identical = a.sigma.step(t).values == b.sigma.step(t).values;
  MonteCarloOptions big = o;
  big.samples = 4000;
  big.seed = 18;
  ErrorBarReport c = monte_carlo_error_bars(e, big);
  double num = 0, den = 0;
  for (int t = 0; t < a.sigma.size(); ++t)
    for (std::size_t k = 0; k < a.sigma.step(t).values.size(); ++k)
      for (int m = 0; m < kModes; ++m) {
        double d = a.sigma.step(t).values[k][m] - c.sigma.step(t).values[k][m];
        num += d * d;
        den += c.sigma.step(t).values[k][m] * c.sigma.step(t).values[k][m];
      }
  const double rel = std::sqrt(num / den), bound = 3 / std::sqrt(1000.0);
  return {identical && rel <= bound,
          std::string(identical ? "bit-identical rerun" : "rerun DIFFERS") + fmt(", relative deviation %.4f (bound %.4f)", rel, bound)};
}

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "Hadamard wavefront speeds", 1, hadamard_wavefronts},
      {2, "two-plate arm speeds", 5, repelling_speeds},
      {3, "crossing versus repulsion", 5, crossing_classification},
      {4, "multi-lobe structure", 10, lobes},
      {5, "two-trip universality", 30, universal_factorization},
      {6, "one-trip round trip", 10, one_trip_round_trip},
      {7, "three-step protocol", 10, three_step},
      {8, "circle integrity", 10, circle_integrity},
      {9, "circle revivals", 5, revivals},
      {10, "circle equidistribution", 5, equidistribution},
      {11, "partial direction reversal", 5, partial_reversal},
      {12, "split-step speed pair", 30, split_step},
      {13, "eight-wavefront bound", 60, eight_wavefronts},
      {14, "balanced coin matrix", 1, balanced_coin},
      {15, "Monte Carlo determinism and convergence", 60, monte_carlo},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.budget_s;
    bool ok = o.pass && in_time;
    failed += !ok;
    std::printf("%s %2d %-40s %s [%.2f s / %.0f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
