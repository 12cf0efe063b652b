#include "loopwalk/optics.hpp"

namespace lw {

const char* mode_name(int mode) {
  static const char* names[] = {"cH", "cV", "ccH", "ccV"};
  if (mode < 0 || mode >= kModes) throw std::out_of_range("optics: mode index");
  return names[mode];
}

const char* kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::QWP: return "QWP";
    case ElementKind::HWP: return "HWP";
    case ElementKind::EOM: return "EOM";
  }
  return "?";
}

Unitary2 qwp_matrix(Degrees alpha) {
  const double c = std::cos(2 * alpha.radians()), s = std::sin(2 * alpha.radians());
  const cd i(0, 1);
  Mat2 m;
  m << c + i, s, s, -c + i;
  return Unitary2::trusted(-i / std::sqrt(2.0) * m);
}

Unitary2 hwp_matrix(Degrees alpha) {
  const double c = std::cos(2 * alpha.radians()), s = std::sin(2 * alpha.radians());
  Mat2 m;
  m << c, s, s, -c;
  return Unitary2::trusted(m);
}

Unitary2 eom_matrix(Degrees phi) {
  const double c = std::cos(phi.radians()), s = std::sin(phi.radians());
  const cd mis(0, -s);
  Mat2 m;
  m << c, mis, mis, c;
  return Unitary2::trusted(m);
}

Unitary2 hadamard() { return hwp_matrix(Degrees{22.5}); }
Unitary2 h_prime() { return eom_matrix(Degrees{45.0}); }

Unitary2 OpticalElement::matrix() const {
  if (!std::isfinite(setting.value)) throw NumericalError("optics: non-finite element setting");
  switch (kind) {
    case ElementKind::QWP: return qwp_matrix(setting);
    case ElementKind::HWP: return hwp_matrix(setting);
    case ElementKind::EOM: return eom_matrix(setting);
  }
  throw std::logic_error("optics: unknown element kind");
}

Unitary2 arm_operator(const ArmSetting& arm, ArmOrder order) {
  Unitary2 out = Unitary2::identity();
  for (const auto& e : arm.plates) out = out * e.matrix();
  for (auto it = arm.plates.rbegin(); it != arm.plates.rend(); ++it) out = out * it->matrix();
  Unitary2 modulator = eom_matrix(arm.eom_phase);
  return order == ArmOrder::PlatesThenEom ? out * modulator : modulator * out;
}

Unitary2 loop_operator(const std::vector<OpticalElement>& elements) {
  Unitary2 out = Unitary2::identity();
  for (const auto& e : elements) out = out * e.matrix();
  return out;
}

Unitary4 coin_ll(const Unitary2& loop) { return coin_ll_independent(loop, loop); }

Unitary4 coin_ll_independent(const Unitary2& loop_cw, const Unitary2& loop_ccw) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<2, 2>() = loop_cw.matrix();
  m.bottomRightCorner<2, 2>() = loop_ccw.matrix();
  return Unitary4::trusted(m);
}

Unitary4 coin_ab(const Unitary2& arm_a, const Unitary2& arm_b) {
  const Mat2& a = arm_a.matrix();
  const Mat2& b = arm_b.matrix();
  Mat4 m = Mat4::Zero();
  m(0, 0) = a(0, 0);
  m(0, 3) = a(0, 1);
  m(3, 0) = a(1, 0);
  m(3, 3) = a(1, 1);
  m(1, 1) = b(1, 1);
  m(1, 2) = b(1, 0);
  m(2, 1) = b(0, 1);
  m(2, 2) = b(0, 0);
  return Unitary4::trusted(m);
}

Unitary4 full_coin(const Unitary2& arm_a, const Unitary2& arm_b, const Unitary2& loop) {
  return coin_ab(arm_a, arm_b) * coin_ll(loop);
}

Unitary4 CoinSetting::realize() const {
  return full_coin(arm_operator(arm_a, order), arm_operator(arm_b, order), loop_operator(loop));
}

OpticalElement qwp(double deg, std::string label) { return {ElementKind::QWP, Degrees{deg}, std::move(label)}; }
OpticalElement hwp(double deg, std::string label) { return {ElementKind::HWP, Degrees{deg}, std::move(label)}; }
OpticalElement eom(double deg, std::string label) { return {ElementKind::EOM, Degrees{deg}, std::move(label)}; }

ArmSetting arm(std::vector<OpticalElement> plates, double eom_deg, std::string eom_label) {
  return ArmSetting{std::move(plates), Degrees{eom_deg}, std::move(eom_label)};
}

}  // namespace lw
