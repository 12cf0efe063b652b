#include "loopwalk/analysis.hpp"
#include "loopwalk/graphs.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace lw;

namespace {

SiteRecord run_circle(const CircleSpec& spec, const WalkerState& init, int steps) {
  GraphProgram g = circle_program(spec);
  return map_sites(g.sites, evolve(init, g.program, steps));
}

}  // namespace

TEST_CASE("circle rejects odd and tiny sizes") {
  try {
    circle_program(CircleSpec{7, 0, Flavor::NonMixing});
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("even size required") != std::string::npos);
  }
  CHECK_THROWS_AS(circle_program(CircleSpec{2, 0, Flavor::NonMixing}), std::invalid_argument);
}

TEST_CASE("circle maps every in-circle mode to one node") {
  for (int n : {4, 8, 10}) {
    CircleSpec spec{n, -1, Flavor::HadamardLike};
    GraphProgram g = circle_program(spec);
    CHECK(g.sites.size() == n);
    for (int m = 0; m < n; ++m) {
      CHECK(!g.sites.members(m).empty());
      for (auto [x, mode] : g.sites.members(m)) CHECK(g.sites.node_of(x, mode) == m);
    }
  }
}

TEST_CASE("circles keep the walker inside and conserve norm") {
  std::mt19937_64 rng(51);
  for (int n : {4, 8, 10, 16})
    for (Flavor f : {Flavor::NonMixing, Flavor::HadamardLike}) {
      CircleSpec spec{n, -2, f};
      WalkerState init;
      init.set(spec.left_end + 1, lwtest::random_vec4(rng));
      GraphProgram g = circle_program(spec);
      IntensityRecord rec = evolve(init, g.program, 25);
      SiteRecord sr = map_sites(g.sites, rec);
      for (int t = 0; t < sr.steps(); ++t) {
        CHECK(sr.leak[t] <= 1e-12);
        CHECK(std::abs(rec.total(t) - 1) < 1e-10);
        double s = 0;
        for (double p : sr.p[t]) s += p;
        CHECK(std::abs(s - 1) < 1e-10);
      }
      CHECK(sr.warnings.empty());
    }
}

// oracle: the non-mixing circle is a rotation of the node index
TEST_CASE("non-mixing circle rotates a localized walker rigidly") {
  for (int n : {4, 8, 12}) {
    CircleSpec spec{n, 0, Flavor::NonMixing};
    for (int mode = 0; mode < 4; ++mode) {
      GraphProgram g = circle_program(spec);
      WalkerState init;
      Vec4 a = Vec4::Zero();
      a(mode) = 1;
      init.set(1, a);
      if (g.sites.node_of(1, mode) < 0) continue;
      SiteRecord sr = map_sites(g.sites, evolve(init, g.program, 3 * n));
      auto where = [&](int t) {
        auto it = std::max_element(sr.p[t].begin(), sr.p[t].end());
        CHECK(std::abs(*it - 1) < 1e-12);
        return static_cast<int>(it - sr.p[t].begin());
      };
      const int m0 = where(0);
      const int dir = ((where(1) - m0) % n + n) % n == 1 ? 1 : -1;
      for (int t = 0; t <= 3 * n; ++t) CHECK(where(t) == ((m0 + dir * t) % n + n) % n);
    }
  }
}

TEST_CASE("four-site circle revivals") {
  SiteRecord sr = run_circle(CircleSpec{4, 0, Flavor::HadamardLike}, make_initial(Direction::ccw, Polarization::H, 1), 8);
  auto rev = find_revivals(sr);
  bool shifted4 = false, perfect8 = false;
  for (const auto& r : rev) {
    shifted4 = shifted4 || (r.step == 4 && r.shift == 2 && r.kind == RevivalKind::shifted);
    perfect8 = perfect8 || (r.step == 8 && r.kind == RevivalKind::perfect);
  }
  CHECK(shifted4);
  CHECK(perfect8);
}

TEST_CASE("eight-site circle revives at 24 and mixes at 11") {
  CircleSpec spec{8, -2, Flavor::HadamardLike};
  SiteRecord sr = run_circle(spec, make_initial(Direction::ccw, Polarization::H, -1), 24);
  bool perfect24 = false;
  for (const auto& r : find_revivals(sr)) perfect24 = perfect24 || (r.step == 24 && r.kind == RevivalKind::perfect);
  CHECK(perfect24);
  CHECK(equidistribution_similarity(sr, 11, {1, 3, 5, 7}) >= 0.99);
}

TEST_CASE("figure-eight stays on the graph") {
  for (Flavor f : {Flavor::NonMixing, Flavor::HadamardLike}) {
    FigureEightSpec spec{-4, 0, 4, f};
    GraphProgram g = figure_eight_program(spec);
    CHECK(g.sites.size() == 2 * ((spec.center - spec.left_end) + (spec.right_end - spec.center)) - 1);  // center shared
    SiteRecord sr = map_sites(g.sites, evolve(make_initial(Direction::cw, Polarization::D, -2), g.program, 40));
    for (int t = 0; t < sr.steps(); ++t) CHECK(sr.leak[t] <= 1e-12);
  }
  CHECK_THROWS_AS(figure_eight_program(FigureEightSpec{-1, 0, 4, Flavor::NonMixing}), std::invalid_argument);
}

TEST_CASE("leaving the mapped support raises a warning") {
  GraphProgram g = circle_program(CircleSpec{4, 0, Flavor::NonMixing});
  IntensityRecord rec = evolve(make_initial(Direction::ccw, Polarization::H, 9),
                               CoinProgram::uniform(lwtest::hadamard_setting()), 2);
  SiteRecord sr = map_sites(g.sites, rec);
  CHECK(sr.leak[0] > kLeakWarning);
  CHECK(!sr.warnings.empty());
}
