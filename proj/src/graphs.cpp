#include "loopwalk/graphs.hpp"

#include <sstream>

namespace lw {

const char* flavor_name(Flavor f) { return f == Flavor::NonMixing ? "non-mixing" : "hadamard-like"; }

int SiteMap::add_node(std::vector<std::pair<int, int>> members) {
  const int m = size();
  for (const auto& key : members) {
    if (!index_.emplace(key, m).second)
      throw std::logic_error("graph_programs: (x, mode) mapped twice in site map");
  }
  members_.push_back(std::move(members));
  return m;
}

int SiteMap::node_of(int x, int mode) const {
  auto it = index_.find({x, mode});
  return it == index_.end() ? -1 : it->second;
}

int SiteMap::node_of_position(int x, bool ccw_half) const { return node_of(x, ccw_half ? ccH : cH); }

CoinProgram line_program(const Unitary2& arm_a, const Unitary2& arm_b, const Unitary2& loop) {
  return CoinProgram::uniform(full_coin(arm_a, arm_b, loop));
}

CoinProgram line_program(const CoinSetting& setting) { return CoinProgram::uniform(setting); }

namespace {

// the arms carry one double-passed QWP(45) and an EOM; the loop a fixed plate and an EOM
CoinSetting graph_setting(Flavor f, double arm_eom, double loop_eom) {
  CoinSetting s;
  s.arm_a = arm({qwp(45, "arm_a.qwp")}, arm_eom, "arm_a.eom");
  s.arm_b = arm({qwp(45, "arm_b.qwp")}, arm_eom, "arm_b.eom");
  OpticalElement plate = f == Flavor::NonMixing ? hwp(45, "loop.plate") : qwp(45, "loop.plate");
  s.loop = {plate, eom(loop_eom, "loop.eom")};
  return s;
}

std::vector<std::pair<int, int>> upper(int x) { return {{x, ccH}, {x, ccV}}; }
std::vector<std::pair<int, int>> lower(int x) { return {{x, cH}, {x, cV}}; }
std::vector<std::pair<int, int>> whole(int x) { return {{x, cH}, {x, cV}, {x, ccH}, {x, ccV}}; }

}  // namespace

CoinSetting inner_setting(Flavor f) { return graph_setting(f, 0.0, 0.0); }

CoinSetting end_setting(Flavor f) {
  return f == Flavor::NonMixing ? graph_setting(f, -90.0, -90.0) : graph_setting(f, -45.0, -45.0);
}

CoinSetting center_setting(Flavor f) {
  return f == Flavor::NonMixing ? graph_setting(f, -90.0, 0.0) : graph_setting(f, -45.0, 0.0);
}

GraphProgram circle_program(const CircleSpec& spec) {
  if (spec.num_sites % 2 != 0)
    throw std::invalid_argument("graph_programs: even size required (num_sites = " + std::to_string(spec.num_sites) + ")");
  if (spec.num_sites < 4)
    throw std::invalid_argument("graph_programs: circle needs at least 4 sites");
  const int L = spec.left_end, R = spec.right_end(), N = spec.half();

  GraphProgram g;
  const auto inner = CoinEntry::from_setting(inner_setting(spec.flavor));
  const auto ends = CoinEntry::from_setting(end_setting(spec.flavor));
  g.program.set_fallback(0, inner);
  g.program.set_site(0, L, ends);
  g.program.set_site(0, R, ends);

  g.sites.add_node(lower(L + 1));
  g.sites.add_node(whole(L));
  for (int x = L + 1; x <= R - 1; ++x) g.sites.add_node(upper(x));
  g.sites.add_node(whole(R));
  for (int x = R - 1; x >= L + 2; --x) g.sites.add_node(lower(x));
  if (g.sites.size() != 2 * N) throw std::logic_error("graph_programs: circle site count mismatch");
  return g;
}

GraphProgram figure_eight_program(const FigureEightSpec& spec) {
  const int L = spec.left_end, C = spec.center, R = spec.right_end;
  if (!(L + 1 < C && C + 1 < R))
    throw std::invalid_argument("graph_programs: figure-eight needs left_end < center < right_end with nonempty arcs");

  GraphProgram g;
  const auto inner = CoinEntry::from_setting(inner_setting(spec.flavor));
  const auto ends = CoinEntry::from_setting(end_setting(spec.flavor));
  g.program.set_fallback(0, inner);
  g.program.set_site(0, L, ends);
  g.program.set_site(0, R, ends);
  g.program.set_site(0, C, CoinEntry::from_setting(center_setting(spec.flavor)));

  for (int x = C - 1; x > L; --x) g.sites.add_node(lower(x));
  g.sites.add_node(whole(L));
  for (int x = L + 1; x < C; ++x) g.sites.add_node(upper(x));
  g.sites.add_node(whole(C));
  for (int x = C + 1; x < R; ++x) g.sites.add_node(lower(x));
  g.sites.add_node(whole(R));
  for (int x = R - 1; x > C; --x) g.sites.add_node(upper(x));
  return g;
}

SiteRecord map_sites(const SiteMap& map, const IntensityRecord& record) {
  SiteRecord out;
  for (int t = 0; t < record.size(); ++t) {
    std::vector<double> p(map.size(), 0.0);
    double leak = 0;
    const auto& st = record.step(t);
    for (std::size_t i = 0; i < st.values.size(); ++i) {
      const int x = st.min_x + static_cast<int>(i);
      for (int d = 0; d < kModes; ++d) {
        const int m = map.node_of(x, d);
        if (m < 0)
          leak += st.values[i][d];
        else
          p[m] += st.values[i][d];
      }
    }
    if (leak > kLeakWarning) {
      std::ostringstream os;
      os << "graph_programs: intensity " << leak << " outside the mapped support at step " << t;
      out.warnings.push_back(os.str());
    }
    out.p.push_back(std::move(p));
    out.leak.push_back(leak);
  }
  return out;
}

}  // namespace lw
