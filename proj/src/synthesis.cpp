#include "loopwalk/synthesis.hpp"

#include <sstream>

namespace lw {

namespace {

Vec2 complement(const Vec2& v) { return Vec2(-std::conj(v(1)), std::conj(v(0))); }

void gather(const Mat4& c, Mat42& m1, Mat42& m2) {
  m1 << c(0, 0), c(0, 1), c(3, 0), c(3, 1), c(1, 2), c(1, 3), c(2, 2), c(2, 3);
  m2 << c(0, 2), c(0, 3), c(3, 2), c(3, 3), c(1, 0), c(1, 1), c(2, 0), c(2, 1);
}

// leading singular pair of a 4x2 matrix: m ~ column * row^T, row of unit norm
void rank_one(const Mat42& m, Vec4& column, Vec2& row, Eigen::Vector2d& sigma) {
  Eigen::HouseholderQR<Mat42> qr(m);
  Mat2 r = qr.matrixQR().topRows<2>().triangularView<Eigen::Upper>();
  Svd2 sv = svd_2x2(r);
  sigma = sv.sigma;
  Mat42 q = qr.householderQ() * Mat42::Identity();
  column = sigma(0) * (q * sv.u.col(0));
  row = sv.v.col(0).conjugate();
  if (sigma(0) == 0.0) {
    column.setZero();
    row << 1, 0;
  }
}

// first entry of `row` with non-negligible modulus made real positive
void fix_gauge(Vec2& row, Vec4& column) {
  int k = std::abs(row(0)) > 1e-12 ? 0 : 1;
  if (std::abs(row(k)) == 0.0) return;
  cd ph = row(k) / std::abs(row(k));
  row /= ph;
  column *= ph;
}

std::string sigma_text(const Eigen::Vector2d& s) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << s(0) << ", " << s(1) << ")";
  return os.str();
}

}  // namespace

Unitary4 OneTripFactors::compose() const {
  return coin_ab(arm_a, arm_b) * coin_ll_independent(loop_cw, loop_ccw);
}

OneTripResult one_trip_test(const Unitary4& c, double rel_tol) {
  OneTripResult out;
  OneTripWitness& w = out.witness;
  gather(c.matrix(), w.m1, w.m2);
  rank_one(w.m1, w.beta, w.alpha, w.sigma1);
  rank_one(w.m2, w.delta, w.gamma, w.sigma2);
  fix_gauge(w.alpha, w.beta);
  fix_gauge(w.gamma, w.delta);
  auto rank1 = [&](const Eigen::Vector2d& s) { return s(0) > 0.0 && s(1) <= rel_tol * s(0); };
  out.decomposable = rank1(w.sigma1) && rank1(w.sigma2);
  return out;
}

OneTripFactors one_trip_reconstruct(const Unitary4& c, double rel_tol) {
  OneTripResult t = one_trip_test(c, rel_tol);
  const OneTripWitness& w = t.witness;
  if (!t.decomposable)
    throw NumericalError("coin_synthesis: coin is not one-trip decomposable; singular values " +
                         sigma_text(w.sigma1) + " and " + sigma_text(w.sigma2));
  Mat2 a, b, l;
  a << w.beta(0), w.delta(0), w.beta(1), w.delta(1);
  b << w.beta(3), w.delta(3), w.beta(2), w.delta(2);
  l.row(0) = w.alpha.transpose();
  l.row(1) = w.gamma.transpose();
  OneTripFactors f;
  f.arm_a = Unitary2(a);
  f.arm_b = Unitary2(b);
  f.loop_cw = Unitary2(l);
  f.loop_ccw = f.loop_cw;
  return f;
}

Mat4 one_trip_projection(const Unitary4& c) {
  OneTripWitness w = one_trip_test(c).witness;
  Mat42 p1 = w.beta * w.alpha.transpose();
  Mat42 p2 = w.delta * w.gamma.transpose();
  Mat4 m;
  m << p1(0, 0), p1(0, 1), p2(0, 0), p2(0, 1),
       p2(2, 0), p2(2, 1), p1(2, 0), p1(2, 1),
       p2(3, 0), p2(3, 1), p1(3, 0), p1(3, 1),
       p1(1, 0), p1(1, 1), p2(1, 0), p2(1, 1);
  return m;
}

bool one_trip_test_independent(const Unitary4& c, double rel_tol) {
  const Mat4& m = c.matrix();
  auto block = [&](int r0, int r1, int c0) {
    Mat2 b;
    b << m(r0, c0), m(r0, c0 + 1), m(r1, c0), m(r1, c0 + 1);
    return numerical_rank(b, rel_tol) == 1;
  };
  return block(0, 3, 0) && block(1, 2, 0) && block(0, 3, 2) && block(1, 2, 2);
}

const char* branch_name(FactorBranch b) {
  switch (b) {
    case FactorBranch::generic: return "generic";
    case FactorBranch::unit_singular_value: return "unit_singular_value";
    case FactorBranch::block_diagonal: return "block_diagonal";
  }
  return "?";
}

Mat4 UniversalFactorization::product() const { return second.compose().matrix() * first.compose().matrix(); }

double UniversalFactorization::residual(const Unitary4& target) const {
  return max_abs_diff(product(), phase * target.matrix());
}

UniversalFactorization factor_universal(const Unitary4& c) {
  const Mat4& m = c.matrix();
  const Mat2 tl = m.topLeftCorner<2, 2>(), tr = m.topRightCorner<2, 2>();
  const Mat2 bl = m.bottomLeftCorner<2, 2>(), br = m.bottomRightCorner<2, 2>();

  UniversalFactorization f;
  if (tr.cwiseAbs().maxCoeff() <= 1e-14 && bl.cwiseAbs().maxCoeff() <= 1e-14) {
    f.branch = FactorBranch::block_diagonal;
    f.first.loop_cw = Unitary2(tl);
    f.first.loop_ccw = Unitary2(br);
    f.p << 1, 0;
    f.q << 0, 1;
    f.r = f.p;
    f.s = f.q;
    f.P = f.p;
    f.Q = f.q;
    f.R = f.p;
    f.S = f.q;
    return f;
  }

  Svd2 sv = svd_2x2(tl);
  const double s1 = sv.sigma(0), s2 = sv.sigma(1);
  f.branch = std::abs(1.0 - s1) <= 1e-10 ? FactorBranch::unit_singular_value : FactorBranch::generic;
  f.p = sv.u.col(0);
  f.q = sv.u.col(1);
  f.P = sv.v.col(0);
  f.Q = sv.v.col(1);

  // input-side pair of the right half: C_TR^dag q is parallel to R
  Vec2 y = tr.adjoint() * f.q;
  f.R = y.norm() > 0.0 ? Vec2(y / y.norm()) : Vec2(1, 0);
  f.S = complement(f.R);

  // output-side pair of the lower half from whichever source is better conditioned
  Vec2 w = (1.0 - s2 * s2 >= s2 * s2) ? Vec2(bl * f.Q) : Vec2(br * f.R);
  f.r = w / w.norm();
  f.s = complement(f.r);

  const cd a_hh = s1, b_vv = s2;
  const cd a_hv = f.p.dot(tr * f.S), b_vh = f.q.dot(tr * f.R);
  const cd a_vh = f.s.dot(bl * f.P), b_hv = f.r.dot(bl * f.Q);
  const cd a_vv = f.s.dot(br * f.S), b_hh = f.r.dot(br * f.R);

  Mat2 a, b, l1, l1p, l2, l2p;
  a << a_hh, a_hv, a_vh, a_vv;
  b << b_hh, b_hv, b_vh, b_vv;
  l1.row(0) = f.P.adjoint();
  l1.row(1) = f.Q.adjoint();
  l1p.row(0) = f.R.adjoint();
  l1p.row(1) = f.S.adjoint();
  l2.col(0) = f.p;
  l2.col(1) = f.q;
  l2p.col(0) = f.r;
  l2p.col(1) = f.s;

  f.first.arm_a = Unitary2(a);
  f.first.arm_b = Unitary2(b);
  f.first.loop_cw = Unitary2(l1);
  f.first.loop_ccw = Unitary2(l1p);
  f.second.loop_cw = Unitary2(l2);
  f.second.loop_ccw = Unitary2(l2p);
  return f;
}

UniversalFactorization su2_normalize(const UniversalFactorization& f) {
  auto det_phase = [](const Unitary2& u) { return std::arg(u.matrix().determinant()); };
  const double th_l2 = det_phase(f.second.loop_cw), th_l2p = det_phase(f.second.loop_ccw);
  const double th_l1 = det_phase(f.first.loop_cw), th_l1p = det_phase(f.first.loop_ccw);

  // diagonal phases slipped in on both sides of the arm stage
  std::array<double, 4> x{th_l2 / 2, th_l2 / 2, th_l2p / 2, th_l2p / 2};
  std::array<double, 4> y{-th_l1 / 2, -th_l1 / 2, -th_l1p / 2, -th_l1p / 2};

  Mat4 ab = coin_ab(f.first.arm_a, f.first.arm_b).matrix();
  auto arm_dets = [&](const std::array<double, 4>& xs) {
    double da = det_phase(f.first.arm_a) + xs[0] + xs[3] - y[0] - y[3];
    double db = det_phase(f.first.arm_b) + xs[1] + xs[2] - y[1] - y[2];
    return std::pair{da, db};
  };
  auto [da, db] = arm_dets(x);
  double bal = -wrap_phase(da - db) / 2;
  x[0] += bal;
  x[1] -= bal;
  std::tie(da, db) = arm_dets(x);
  const cd gamma = std::polar(1.0, -da / 2);

  auto diag = [](const std::array<double, 4>& v, double sign) {
    Mat4 d = Mat4::Zero();
    for (int i = 0; i < 4; ++i) d(i, i) = std::polar(1.0, sign * v[i]);
    return d;
  };
  Mat4 X = diag(x, 1.0), Xinv = diag(x, -1.0), Y = diag(y, 1.0), Yinv = diag(y, -1.0);

  Mat4 ab_new = gamma * (X * ab * Yinv);
  Mat4 l1_new = Y * coin_ll_independent(f.first.loop_cw, f.first.loop_ccw).matrix();
  Mat4 l2_new = coin_ll_independent(f.second.loop_cw, f.second.loop_ccw).matrix() * Xinv;

  UniversalFactorization out = f;
  Mat2 a, b;
  a << ab_new(0, 0), ab_new(0, 3), ab_new(3, 0), ab_new(3, 3);
  b << ab_new(2, 2), ab_new(2, 1), ab_new(1, 2), ab_new(1, 1);
  out.first.arm_a = Unitary2(a);
  out.first.arm_b = Unitary2(b);
  out.first.loop_cw = Unitary2(Mat2(l1_new.topLeftCorner<2, 2>()));
  out.first.loop_ccw = Unitary2(Mat2(l1_new.bottomRightCorner<2, 2>()));
  out.second.loop_cw = Unitary2(Mat2(l2_new.topLeftCorner<2, 2>()));
  out.second.loop_ccw = Unitary2(Mat2(l2_new.bottomRightCorner<2, 2>()));
  out.phase = f.phase * gamma;
  return out;
}

ThreeStepSchedule three_step_schedule(const Unitary4& target, bool allow_fast_path) {
  ThreeStepSchedule out;
  const auto id = CoinEntry::from_matrix(Unitary4::identity());
  if (allow_fast_path && one_trip_test(target).decomposable) {
    out.fast_path = true;
    out.program.set_fallback(0, CoinEntry::from_matrix(target));
    out.program.set_fallback(1, id);
    out.program.set_fallback(2, id);
    return out;
  }
  UniversalFactorization f = factor_universal(target);
  out.phase = f.phase;
  out.program.set_fallback(0, CoinEntry::from_matrix(f.first.compose()));
  out.program.set_fallback(1, id);
  out.program.set_fallback(2, CoinEntry::from_matrix(f.second.compose()));
  return out;
}

Unitary4 grover_coin() {
  Mat4 g = Mat4::Constant(0.5) - Mat4::Identity();
  return Unitary4(g, 1e-14);
}

Unitary4 fourier_coin() {
  Mat4 f;
  const cd i(0, 1);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) f(r, c) = std::pow(i, r * c) / 2.0;
  return Unitary4(f, 1e-14);
}

}  // namespace lw
