#include "loopwalk/walk.hpp"

#include <cmath>

namespace lw {

namespace {
constexpr int kParallelSites = 2048;
}

Vec4 WalkerState::at(int x) const {
  if (amps_.empty() || x < min_x() || x > max_x()) return Vec4::Zero();
  return amps_[x - origin_];
}

void WalkerState::set(int x, const Vec4& a) {
  if (!a.allFinite()) throw NumericalError("walk_engine: non-finite amplitude at x = " + std::to_string(x));
  if (amps_.empty()) {
    origin_ = x;
    amps_.assign(1, a);
    return;
  }
  if (x < origin_) {
    amps_.insert(amps_.begin(), origin_ - x, Vec4::Zero());
    origin_ = x;
  } else if (x > max_x()) {
    amps_.resize(x - origin_ + 1, Vec4::Zero());
  }
  amps_[x - origin_] = a;
}

double WalkerState::norm2() const {
  double s = 0;
  for (const auto& a : amps_) s += a.squaredNorm();
  return s;
}

void WalkerState::reset_window(int origin, std::size_t width) {
  origin_ = origin;
  amps_.assign(width, Vec4::Zero());
}

WalkerState make_initial(Direction d, Polarization p, int x) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec2 pol;
  switch (p) {
    case Polarization::H: pol << 1, 0; break;
    case Polarization::V: pol << 0, 1; break;
    case Polarization::D: pol << r, r; break;
    case Polarization::A: pol << r, -r; break;
  }
  Vec4 a = Vec4::Zero();
  if (d == Direction::cw)
    a.head<2>() = pol;
  else
    a.tail<2>() = pol;
  WalkerState s;
  s.set(x, a);
  return s;
}

CoinProgram::CoinProgram(int period) {
  if (period < 1) throw std::invalid_argument("walk_engine: coin program period must be >= 1");
  layers_.resize(period);
}

CoinProgram CoinProgram::uniform(const Unitary4& c) {
  CoinProgram p;
  p.set_fallback(0, CoinEntry::from_matrix(c));
  return p;
}

CoinProgram CoinProgram::uniform(const CoinSetting& s) {
  CoinProgram p;
  p.set_fallback(0, CoinEntry::from_setting(s));
  return p;
}

void CoinProgram::set_fallback(int layer, CoinEntry e) { layers_.at(layer).fallback = std::move(e); }

void CoinProgram::set_site(int layer, int x, CoinEntry e) { layers_.at(layer).sites.insert_or_assign(x, std::move(e)); }

bool CoinProgram::resolvable(int t, int x) const {
  const Layer& l = layers_[static_cast<std::size_t>(t) % layers_.size()];
  return l.sites.count(x) || l.fallback.has_value();
}

const Mat4& CoinProgram::coin(int t, int x) const {
  if (t < 0) throw std::invalid_argument("walk_engine: negative step index");
  const Layer& l = layers_[static_cast<std::size_t>(t) % layers_.size()];
  auto it = l.sites.find(x);
  if (it != l.sites.end()) return it->second.coin.matrix();
  if (l.fallback) return l.fallback->coin.matrix();
  throw std::out_of_range("walk_engine: no coin resolved at position x = " + std::to_string(x) +
                          " (step " + std::to_string(t) + ")");
}

WalkerState apply_step(const WalkerState& s) {
  WalkerState out;
  if (s.empty()) return out;
  out.reset_window(s.min_x() - 1, s.sites().size() + 2);
  const auto& in = s.sites();
  auto& o = out.sites();
  // input index i sits at x = min_x + i, i.e. output index i + 1
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec4& a = in[i];
    o[i](ccH) = a(cH);
    o[i + 2](ccV) = a(cV);
    o[i + 2](cH) = a(ccH);
    o[i](cV) = a(ccV);
  }
  return out;
}

WalkerState apply_coin(const WalkerState& s, const CoinProgram& program, int t) {
  WalkerState out = s;
  auto& sites = out.sites();
  const int n = static_cast<int>(sites.size());
  std::vector<const Mat4*> coins(n, nullptr);
  for (int i = 0; i < n; ++i) {
    if (sites[i].isZero(0.0)) continue;
    coins[i] = &program.coin(t, s.origin() + i);
  }
#pragma omp parallel for schedule(static) if (n >= kParallelSites)
  for (int i = 0; i < n; ++i) {
    if (coins[i]) sites[i] = (*coins[i]) * sites[i];
  }
  return out;
}

void IntensityRecord::push(const WalkerState& s) {
  Step st;
  st.min_x = s.min_x();
  st.values.resize(s.sites().size());
  for (std::size_t i = 0; i < s.sites().size(); ++i)
    for (int m = 0; m < kModes; ++m) st.values[i][m] = std::norm(s.sites()[i](m));
  steps_.push_back(std::move(st));
}

double IntensityRecord::at(int t, int x, int mode) const {
  const Step& st = step(t);
  int i = x - st.min_x;
  if (i < 0 || i >= static_cast<int>(st.values.size())) return 0.0;
  return st.values[i][mode];
}

double IntensityRecord::position(int t, int x) const {
  double s = 0;
  for (int m = 0; m < kModes; ++m) s += at(t, x, m);
  return s;
}

double IntensityRecord::total(int t) const {
  double s = 0;
  for (const auto& v : step(t).values)
    for (double p : v) s += p;
  return s;
}

WalkerState propagate(const WalkerState& initial, const CoinProgram& program, int steps, IntensityRecord* record,
                      int first_step) {
  if (steps < 0) throw std::invalid_argument("walk_engine: negative step count");
  WalkerState s = initial;
  if (record) record->push(s);
  for (int t = 0; t < steps; ++t) {
    s = apply_step(apply_coin(s, program, first_step + t));
    if (record) record->push(s);
  }
  return s;
}

IntensityRecord evolve(const WalkerState& initial, const CoinProgram& program, int steps) {
  IntensityRecord rec;
  propagate(initial, program, steps, &rec);
  return rec;
}

TracedTable trace_intensities(const IntensityRecord& record, Trace mode) {
  TracedTable out;
  out.mode = mode;
  switch (mode) {
    case Trace::full: out.columns = {"cH", "cV", "ccH", "ccV"}; break;
    case Trace::sum_polarization: out.columns = {"cw", "ccw"}; break;
    case Trace::sum_direction: out.columns = {"H", "V"}; break;
    case Trace::sum_all: out.columns = {"total"}; break;
  }
  for (int t = 0; t < record.size(); ++t) {
    const auto& st = record.step(t);
    for (std::size_t i = 0; i < st.values.size(); ++i) {
      const auto& v = st.values[i];
      TracedTable::Row row{t, st.min_x + static_cast<int>(i), {}};
      switch (mode) {
        case Trace::full: row.values.assign(v.begin(), v.end()); break;
        case Trace::sum_polarization: row.values = {v[cH] + v[cV], v[ccH] + v[ccV]}; break;
        case Trace::sum_direction: row.values = {v[cH] + v[ccH], v[cV] + v[ccV]}; break;
        case Trace::sum_all: row.values = {v[cH] + v[cV] + v[ccH] + v[ccV]}; break;
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

Effective2DState Effective2DState::localized(int x, const Vec2& a) {
  Effective2DState s;
  s.origin = x;
  s.amps = {a};
  return s;
}

double Effective2DState::norm2() const {
  double s = 0;
  for (const auto& a : amps) s += a.squaredNorm();
  return s;
}

double Effective2DRecord::position(int t, int x) const {
  const Step& st = steps.at(t);
  int i = x - st.min_x;
  if (i < 0 || i >= static_cast<int>(st.values.size())) return 0.0;
  return st.values[i][0] + st.values[i][1];
}

Effective2DRecord effective_2d_evolve(const Effective2DState& initial, const Unitary2& coin, int steps) {
  if (steps < 0) throw std::invalid_argument("walk_engine: negative step count");
  auto log = [](const Effective2DState& s) {
    Effective2DRecord::Step st;
    st.min_x = s.origin;
    for (const auto& a : s.amps) st.values.push_back({std::norm(a(0)), std::norm(a(1))});
    return st;
  };
  Effective2DRecord rec;
  Effective2DState s = initial;
  rec.steps.push_back(log(s));
  for (int t = 0; t < steps; ++t) {
    Effective2DState n;
    n.origin = s.origin - 1;
    n.amps.assign(s.amps.size() + 2, Vec2::Zero());
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
      Vec2 c = coin.matrix() * s.amps[i];
      n.amps[i + 2](0) = c(0);
      n.amps[i](1) = c(1);
    }
    s = std::move(n);
    rec.steps.push_back(log(s));
  }
  return rec;
}

}  // namespace lw
