#pragma once

#include "loopwalk/optics.hpp"
#include "loopwalk/walk.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lw {

enum class Flavor { NonMixing, HadamardLike };
const char* flavor_name(Flavor f);

struct CircleSpec {
  int num_sites = 8;
  int left_end = -2;
  Flavor flavor = Flavor::HadamardLike;

  int half() const { return num_sites / 2; }
  int right_end() const { return left_end + half(); }
};

struct FigureEightSpec {
  int left_end = -4;
  int center = 0;
  int right_end = 4;
  Flavor flavor = Flavor::NonMixing;
};

// graph node m <-> set of (line position, mode) pairs
class SiteMap {
 public:
  int add_node(std::vector<std::pair<int, int>> members);
  int size() const { return static_cast<int>(members_.size()); }
  int node_of(int x, int mode) const;  // -1 when unmapped
  int node_of_position(int x, bool ccw_half) const;
  const std::vector<std::pair<int, int>>& members(int m) const { return members_.at(m); }

 private:
  std::vector<std::vector<std::pair<int, int>>> members_;
  std::map<std::pair<int, int>, int> index_;
};

struct GraphProgram {
  CoinProgram program;
  SiteMap sites;
};

CoinProgram line_program(const Unitary2& arm_a, const Unitary2& arm_b, const Unitary2& loop);
CoinProgram line_program(const CoinSetting& setting);

// element-level settings used on graphs
CoinSetting inner_setting(Flavor f);
CoinSetting end_setting(Flavor f);
CoinSetting center_setting(Flavor f);

GraphProgram circle_program(const CircleSpec& spec);
GraphProgram figure_eight_program(const FigureEightSpec& spec);

struct SiteRecord {
  std::vector<std::vector<double>> p;  // [step][m]
  std::vector<double> leak;            // intensity outside the mapped support, per step
  std::vector<std::string> warnings;

  int steps() const { return static_cast<int>(p.size()); }
  int nodes() const { return p.empty() ? 0 : static_cast<int>(p.front().size()); }
};

inline constexpr double kLeakWarning = 1e-9;

SiteRecord map_sites(const SiteMap& map, const IntensityRecord& record);

}  // namespace lw
