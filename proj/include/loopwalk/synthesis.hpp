#pragma once

#include "loopwalk/linalg.hpp"
#include "loopwalk/optics.hpp"
#include "loopwalk/walk.hpp"

namespace lw {

// coin_ab(arm_a, arm_b) * coin_ll_independent(loop_cw, loop_ccw)
struct OneTripFactors {
  Unitary2 arm_a = Unitary2::identity();
  Unitary2 arm_b = Unitary2::identity();
  Unitary2 loop_cw = Unitary2::identity();
  Unitary2 loop_ccw = Unitary2::identity();

  Unitary4 compose() const;
};

using Mat42 = Eigen::Matrix<cd, 4, 2>;

struct OneTripWitness {
  Mat42 m1, m2;                   // rows/cols gathered from the coin, see one_trip_test
  Eigen::Vector2d sigma1, sigma2;  // their singular values
  Vec2 alpha, gamma;               // unit row factors (loop block rows)
  Vec4 beta, delta;                // column factors (arm entries)
};

struct OneTripResult {
  bool decomposable = false;
  OneTripWitness witness;
};

OneTripResult one_trip_test(const Unitary4& c, double rel_tol = kRankTol);
OneTripFactors one_trip_reconstruct(const Unitary4& c, double rel_tol = kRankTol);
// rank-one projection of both test matrices scattered back into a 4x4 matrix
Mat4 one_trip_projection(const Unitary4& c);
bool one_trip_test_independent(const Unitary4& c, double rel_tol = kRankTol);

enum class FactorBranch { generic, unit_singular_value, block_diagonal };
const char* branch_name(FactorBranch b);

// second * first = phase * target, second has identity arms
struct UniversalFactorization {
  OneTripFactors first;
  OneTripFactors second;
  cd phase{1.0, 0.0};
  FactorBranch branch = FactorBranch::generic;
  Vec2 p, q, r, s;  // output-side columns
  Vec2 P, Q, R, S;  // input-side rows, stored as kets

  Mat4 product() const;
  double residual(const Unitary4& target) const;
};

UniversalFactorization factor_universal(const Unitary4& c);
UniversalFactorization su2_normalize(const UniversalFactorization& f);

struct ThreeStepSchedule {
  CoinProgram program{3};
  cd phase{1.0, 0.0};
  bool fast_path = false;
};

// coins (first, identity, second) on three consecutive rounds; net map is S * (phase * target)
ThreeStepSchedule three_step_schedule(const Unitary4& target, bool allow_fast_path = true);

Unitary4 grover_coin();
Unitary4 fourier_coin();

}  // namespace lw
