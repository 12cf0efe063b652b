#pragma once

#include "loopwalk/linalg.hpp"

#include <string>
#include <vector>

namespace lw {

// mode order of every 4-vector and 4x4 coin
enum Mode : int { cH = 0, cV = 1, ccH = 2, ccV = 3 };
inline constexpr int kModes = 4;
const char* mode_name(int mode);

struct Degrees {
  double value = 0.0;
  double radians() const { return value * kPi / 180.0; }
};

namespace literals {
constexpr Degrees operator""_deg(long double v) { return Degrees{static_cast<double>(v)}; }
constexpr Degrees operator""_deg(unsigned long long v) { return Degrees{static_cast<double>(v)}; }
}  // namespace literals

Unitary2 qwp_matrix(Degrees alpha);
Unitary2 hwp_matrix(Degrees alpha);
Unitary2 eom_matrix(Degrees phi);

Unitary2 hadamard();
Unitary2 h_prime();  // eom at 45 deg, (1/sqrt2)[[1,-i],[-i,1]]

enum class ElementKind { QWP, HWP, EOM };
const char* kind_name(ElementKind k);

struct OpticalElement {
  ElementKind kind = ElementKind::HWP;
  Degrees setting;
  // elements sharing a label are the same physical component (perturbed together)
  std::string label;

  Unitary2 matrix() const;
};

enum class ArmOrder { PlatesThenEom, EomThenPlates };

struct ArmSetting {
  // the pulse meets these plates going out and again, reversed, after the reflection
  std::vector<OpticalElement> plates;
  Degrees eom_phase;
  std::string eom_label;
};

Unitary2 arm_operator(const ArmSetting& arm, ArmOrder order = ArmOrder::PlatesThenEom);
Unitary2 loop_operator(const std::vector<OpticalElement>& elements);

Unitary4 coin_ll(const Unitary2& loop);
Unitary4 coin_ll_independent(const Unitary2& loop_cw, const Unitary2& loop_ccw);
Unitary4 coin_ab(const Unitary2& arm_a, const Unitary2& arm_b);
Unitary4 full_coin(const Unitary2& arm_a, const Unitary2& arm_b, const Unitary2& loop);

struct CoinSetting {
  ArmSetting arm_a;
  ArmSetting arm_b;
  std::vector<OpticalElement> loop;
  ArmOrder order = ArmOrder::PlatesThenEom;

  Unitary4 realize() const;
};

// convenience builders
OpticalElement qwp(double deg, std::string label = {});
OpticalElement hwp(double deg, std::string label = {});
OpticalElement eom(double deg, std::string label = {});
ArmSetting arm(std::vector<OpticalElement> plates, double eom_deg = 0.0, std::string eom_label = {});

}  // namespace lw
