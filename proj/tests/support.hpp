#pragma once

#include "loopwalk/optics.hpp"
#include "loopwalk/walk.hpp"

#include <random>

namespace lwtest {

using namespace lw;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// random element-level coin: one or two plates per arm, an EOM per arm, a loop of up to three elements
inline CoinSetting random_setting(std::mt19937_64& rng) {
  auto plate = [&]() {
    double a = uniform(rng, -90, 90);
    return uniform(rng, 0, 1) < 0.5 ? qwp(a) : hwp(a);
  };
  auto random_arm = [&]() {
    std::vector<OpticalElement> plates{plate()};
    if (uniform(rng, 0, 1) < 0.5) plates.push_back(plate());
    return arm(plates, uniform(rng, -180, 180));
  };
  CoinSetting s;
  s.arm_a = random_arm();
  s.arm_b = random_arm();
  int n = 1 + static_cast<int>(uniform(rng, 0, 3));
  for (int i = 0; i < n; ++i) s.loop.push_back(uniform(rng, 0, 1) < 0.3 ? eom(uniform(rng, -180, 180)) : plate());
  return s;
}

inline CoinSetting hadamard_setting() { return CoinSetting{arm({qwp(45)}), arm({qwp(45)}), {hwp(22.5)}}; }

inline Vec4 random_vec4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec4 v;
  for (int i = 0; i < 4; ++i) v(i) = cd(g(rng), g(rng));
  return v.normalized();
}

}  // namespace lwtest
