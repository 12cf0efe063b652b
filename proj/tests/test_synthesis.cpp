#include "loopwalk/synthesis.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace lw;

namespace {

Unitary4 composed_coin(std::mt19937_64& rng) {
  return full_coin(haar_unitary<2>(rng), haar_unitary<2>(rng), haar_unitary<2>(rng));
}

double max_det_error(const OneTripFactors& f) {
  double e = 0;
  for (const Unitary2* u : {&f.arm_a, &f.arm_b, &f.loop_cw, &f.loop_ccw})
    e = std::max(e, std::abs(u->matrix().determinant() - 1.0));
  return e;
}

// mixes cV and ccH by angle theta between arbitrary block-diagonal unitaries
Unitary4 partially_mixing(std::mt19937_64& rng, double theta) {
  Mat4 mix = Mat4::Identity();
  mix(1, 1) = std::cos(theta);
  mix(1, 2) = -std::sin(theta);
  mix(2, 1) = std::sin(theta);
  mix(2, 2) = std::cos(theta);
  Mat4 l = coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng)).matrix();
  Mat4 r = coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng)).matrix();
  return Unitary4(l * mix * r);
}

void check_universal(const Unitary4& c, FactorBranch expected) {
  UniversalFactorization f = factor_universal(c);
  CHECK(f.branch == expected);
  CHECK(f.residual(c) <= 1e-9);
  CHECK(std::abs(std::abs(f.phase) - 1) < 1e-12);
  for (const OneTripFactors* g : {&f.first, &f.second})
    for (const Unitary2* u : {&g->arm_a, &g->arm_b, &g->loop_cw, &g->loop_ccw})
      CHECK(unitarity_error(u->matrix()) <= 1e-10);
  CHECK(max_abs_diff(f.second.arm_a.matrix(), Mat2::Identity()) < 1e-12);
  CHECK(max_abs_diff(f.second.arm_b.matrix(), Mat2::Identity()) < 1e-12);
  UniversalFactorization n = su2_normalize(f);
  CHECK(n.residual(c) <= 1e-9);
  CHECK(max_det_error(n.first) < 1e-10);
  CHECK(max_det_error(n.second) < 1e-10);
}

}  // namespace

TEST_CASE("composed coins pass the one-trip test and reconstruct") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    Unitary4 c = composed_coin(rng);
    OneTripResult r = one_trip_test(c);
    REQUIRE(r.decomposable);
    CHECK(r.witness.sigma1(1) < 1e-9 * r.witness.sigma1(0));
    OneTripFactors f = one_trip_reconstruct(c);
    CHECK(max_abs_diff(f.compose().matrix(), c.matrix()) <= 1e-9);
    CHECK(max_abs_diff(f.loop_cw.matrix(), f.loop_ccw.matrix()) < 1e-9);
  }
}

TEST_CASE("element-level coins pass the one-trip test") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) CHECK(one_trip_test(lwtest::random_setting(rng).realize()).decomposable);
}

TEST_CASE("Grover and Fourier coins are not one-trip") {
  CHECK_FALSE(one_trip_test(grover_coin()).decomposable);
  CHECK_FALSE(one_trip_test(fourier_coin()).decomposable);
  CHECK_THROWS_AS(one_trip_reconstruct(grover_coin()), NumericalError);
}

TEST_CASE("projection residual is bounded below by the second singular value") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    Unitary4 c = haar_unitary<4>(rng);
    OneTripResult r = one_trip_test(c);
    double s2 = std::max(r.witness.sigma1(1), r.witness.sigma2(1));
    double res = max_abs_diff(one_trip_projection(c), c.matrix());
    CHECK(res >= s2 / std::sqrt(8.0) - 1e-12);
  }
  std::mt19937_64 rng2(34);
  Unitary4 c = composed_coin(rng2);
  CHECK(max_abs_diff(one_trip_projection(c), c.matrix()) < 1e-9);
}

TEST_CASE("independent loops widen the one-trip class") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    Unitary4 c = coin_ab(haar_unitary<2>(rng), haar_unitary<2>(rng)) *
                 coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng));
    CHECK(one_trip_test_independent(c));
    CHECK_FALSE(one_trip_test(c).decomposable);
  }
  CHECK_FALSE(one_trip_test_independent(grover_coin()));
}

TEST_CASE("two-trip factorization of Haar-random coins") {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 300; ++i) check_universal(haar_unitary<4>(rng), FactorBranch::generic);
}

TEST_CASE("two-trip factorization covers every branch") {
  std::mt19937_64 rng(37);
  SUBCASE("block diagonal") {
    check_universal(coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng)), FactorBranch::block_diagonal);
    check_universal(Unitary4::identity(), FactorBranch::block_diagonal);
  }
  SUBCASE("unit singular value") {
    for (double th : {0.3, 1.0, 2.5}) check_universal(partially_mixing(rng, th), FactorBranch::unit_singular_value);
    check_universal(grover_coin(), FactorBranch::unit_singular_value);
  }
  SUBCASE("fully off-diagonal") {
    Mat4 m = Mat4::Zero();
    m.topRightCorner<2, 2>() = haar_unitary<2>(rng).matrix();
    m.bottomLeftCorner<2, 2>() = haar_unitary<2>(rng).matrix();
    check_universal(Unitary4(m), FactorBranch::generic);
  }
  SUBCASE("generic with a rank-deficient corner") {
    // cos and sin mixing of every mode pair so that the top-left block has rank one
    Mat4 m = Mat4::Zero();
    const double r = 1 / std::sqrt(2.0);
    m << r, 0, r, 0, 0, 0, 0, 1, -r, 0, r, 0, 0, 1, 0, 0;
    Mat4 l = coin_ll_independent(haar_unitary<2>(rng), haar_unitary<2>(rng)).matrix();
    check_universal(Unitary4(l * m), FactorBranch::generic);
  }
  SUBCASE("Fourier and composed coins") {
    check_universal(fourier_coin(), FactorBranch::generic);
    Unitary4 c = composed_coin(rng);
    check_universal(c, factor_universal(c).branch);
  }
}

TEST_CASE("three-step schedule realizes the target on the lattice") {
  std::mt19937_64 rng(38);
  std::vector<Unitary4> targets{grover_coin(), fourier_coin(), haar_unitary<4>(rng), composed_coin(rng)};
  for (const auto& c : targets) {
    for (bool fast : {true, false}) {
      ThreeStepSchedule s = three_step_schedule(c, fast);
      CHECK(s.program.period() == 3);
      for (int i = 0; i < 20; ++i) {
        WalkerState init;
        int x = static_cast<int>(lwtest::uniform(rng, -5, 5));
        init.set(x, lwtest::random_vec4(rng));
        WalkerState got = propagate(init, s.program, 3);
        WalkerState want = apply_step(apply_coin(init, CoinProgram::uniform(Unitary4::trusted(s.phase * c.matrix())), 0));
        double err = 0;
        for (int y = x - 3; y <= x + 3; ++y) err = std::max(err, (got.at(y) - want.at(y)).cwiseAbs().maxCoeff());
        CHECK(err < 1e-9);
      }
    }
  }
  CHECK(three_step_schedule(composed_coin(rng)).fast_path);
  CHECK_FALSE(three_step_schedule(grover_coin()).fast_path);
}
