#pragma once

#include "loopwalk/linalg.hpp"
#include "loopwalk/optics.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lw {

// Dense window of sites [min_x, max_x], grown on demand; nothing outside is stored.
class WalkerState {
 public:
  WalkerState() = default;

  bool empty() const { return amps_.empty(); }
  int min_x() const { return origin_; }
  int max_x() const { return origin_ + static_cast<int>(amps_.size()) - 1; }
  int width() const { return static_cast<int>(amps_.size()); }

  Vec4 at(int x) const;
  void set(int x, const Vec4& a);
  double norm2() const;

  // raw window access for kernels
  int origin() const { return origin_; }
  const std::vector<Vec4>& sites() const { return amps_; }
  std::vector<Vec4>& sites() { return amps_; }
  void reset_window(int origin, std::size_t width);

 private:
  int origin_ = 0;
  std::vector<Vec4> amps_;
};

enum class Direction { cw, ccw };
enum class Polarization { H, V, D, A };

WalkerState make_initial(Direction d, Polarization p, int x);

struct CoinEntry {
  Unitary4 coin = Unitary4::identity();
  std::optional<CoinSetting> setting;  // present when built from elements

  static CoinEntry from_matrix(const Unitary4& c) { return CoinEntry{c, std::nullopt}; }
  static CoinEntry from_setting(const CoinSetting& s) { return CoinEntry{s.realize(), s}; }
};

// Coin per (step, position). Steps cycle through `period` layers; within a layer a
// position override wins over the layer's fallback coin.
class CoinProgram {
 public:
  explicit CoinProgram(int period = 1);

  static CoinProgram uniform(const Unitary4& c);
  static CoinProgram uniform(const CoinSetting& s);

  int period() const { return static_cast<int>(layers_.size()); }
  void set_fallback(int layer, CoinEntry e);
  void set_site(int layer, int x, CoinEntry e);

  const Mat4& coin(int t, int x) const;
  bool resolvable(int t, int x) const;

  // rebuild every element-based entry through f; raw-matrix entries are kept
  template <class F>
  CoinProgram transformed(F&& f) const {
    CoinProgram out = *this;
    for (auto& layer : out.layers_) {
      if (layer.fallback && layer.fallback->setting) layer.fallback = CoinEntry::from_setting(f(*layer.fallback->setting));
      for (auto& [x, e] : layer.sites)
        if (e.setting) e = CoinEntry::from_setting(f(*e.setting));
    }
    return out;
  }

  template <class F>
  void for_each_setting(F&& f) const {
    for (const auto& layer : layers_) {
      if (layer.fallback && layer.fallback->setting) f(*layer.fallback->setting);
      for (const auto& [x, e] : layer.sites)
        if (e.setting) f(*e.setting);
    }
  }

 private:
  struct Layer {
    std::optional<CoinEntry> fallback;
    std::map<int, CoinEntry> sites;
  };
  std::vector<Layer> layers_;
};

// cH at x -> ccH at x-1, cV -> ccV at x+1, ccH -> cH at x+1, ccV -> cV at x-1
WalkerState apply_step(const WalkerState& s);
WalkerState apply_coin(const WalkerState& s, const CoinProgram& program, int t);

class IntensityRecord {
 public:
  struct Step {
    int min_x = 0;
    std::vector<std::array<double, kModes>> values;
  };

  void push(const WalkerState& s);
  void push(Step s) { steps_.push_back(std::move(s)); }

  int size() const { return static_cast<int>(steps_.size()); }
  int last_step() const { return size() - 1; }
  const Step& step(int t) const { return steps_.at(t); }
  Step& step(int t) { return steps_.at(t); }
  int min_x(int t) const { return step(t).min_x; }
  int max_x(int t) const { return step(t).min_x + static_cast<int>(step(t).values.size()) - 1; }

  double at(int t, int x, int mode) const;
  double position(int t, int x) const;
  double total(int t) const;

 private:
  std::vector<Step> steps_;
};

// step 0 holds the initial distribution; entry t is logged after t rounds of S*C
IntensityRecord evolve(const WalkerState& initial, const CoinProgram& program, int steps);
// same loop, returns the final state and optionally fills the record
WalkerState propagate(const WalkerState& initial, const CoinProgram& program, int steps,
                      IntensityRecord* record = nullptr, int first_step = 0);

enum class Trace { full, sum_polarization, sum_direction, sum_all };

struct TracedTable {
  Trace mode = Trace::full;
  std::vector<std::string> columns;
  struct Row {
    int step;
    int x;
    std::vector<double> values;
  };
  std::vector<Row> rows;  // ordered by (step, x)
};

TracedTable trace_intensities(const IntensityRecord& record, Trace mode);

// two-dimensional walk: coin index 0 = R (moves right), 1 = L (moves left)
struct Effective2DState {
  int origin = 0;
  std::vector<Vec2> amps;

  static Effective2DState localized(int x, const Vec2& a);
  double norm2() const;
};

struct Effective2DRecord {
  struct Step {
    int min_x = 0;
    std::vector<std::array<double, 2>> values;
  };
  std::vector<Step> steps;

  double position(int t, int x) const;
};

Effective2DRecord effective_2d_evolve(const Effective2DState& initial, const Unitary2& coin, int steps);

}  // namespace lw
