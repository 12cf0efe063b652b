#include "loopwalk/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace lw {

double unitarity_error(const MatX& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  MatX g = a.adjoint() * a - MatX::Identity(a.rows(), a.cols());
  return g.cwiseAbs().maxCoeff();
}

bool is_unitary(const MatX& a, double tol) {
  return a.rows() == a.cols() && all_finite(a) && unitarity_error(a) <= tol;
}

bool all_finite(const MatX& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag())) return false;
  }
  return true;
}

MatX mat_mul(const MatX& a, const MatX& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("linalg: mat_mul dimension mismatch (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  return a * b;
}

MatX dagger(const MatX& a) { return a.adjoint(); }

double max_abs_diff(const MatX& a, const MatX& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("linalg: shape mismatch in comparison");
  return (a - b).cwiseAbs().maxCoeff();
}

double diff_up_to_phase(const MatX& a, const MatX& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) == 0.0) return max_abs_diff(a, b);
  cd ph = a(r, c) / b(r, c);
  if (std::abs(ph) == 0.0) return max_abs_diff(a, b);
  ph /= std::abs(ph);
  return max_abs_diff(a, ph * b);
}

double wrap_phase(double w) {
  double r = std::remainder(w, 2 * kPi);  // (-pi, pi]
  if (r >= kPi) r -= 2 * kPi;
  return r;
}

template <int N>
Eigensystem<N> eig_unitary(const Unitary<N>& u) {
  using Matrix = Eigen::Matrix<cd, N, N>;
  Eigen::ComplexSchur<Matrix> schur(u.matrix());
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();

  std::array<double, N> ph;
  for (int j = 0; j < N; ++j) ph[j] = wrap_phase(std::arg(t(j, j)));
  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ph[a] < ph[b]; });

  Eigensystem<N> out;
  for (int j = 0; j < N; ++j) {
    out.phase[j] = ph[order[j]];
    out.vectors.col(j) = q.col(order[j]);
  }
  return out;
}

template Eigensystem<2> eig_unitary<2>(const Unitary<2>&);
template Eigensystem<4> eig_unitary<4>(const Unitary<4>&);

namespace {

Vec2 complement(const Vec2& v) { return Vec2(-std::conj(v(1)), std::conj(v(0))); }

}  // namespace

Svd2 svd_2x2(const Mat2& m) {
  Svd2 out;
  out.u.setIdentity();
  out.v.setIdentity();
  out.sigma.setZero();

  Mat2 g = m.adjoint() * m;
  double a = g(0, 0).real(), d = g(1, 1).real();
  cd b = g(0, 1);
  double lam = 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::abs(b));
  double s1 = std::sqrt(std::max(lam, 0.0));
  if (s1 == 0.0) return out;

  Vec2 v1;
  if (std::abs(b) == 0.0) {
    v1 = a >= d ? Vec2(1, 0) : Vec2(0, 1);
  } else {
    Vec2 x(b, lam - a), y(lam - d, std::conj(b));
    v1 = x.norm() >= y.norm() ? x : y;
    v1.normalize();
  }
  Vec2 v2 = complement(v1);
  Vec2 u1 = m * v1 / s1;
  u1.normalize();
  Vec2 u2 = complement(u1);
  cd c = u2.dot(m * v2);  // conj(u2) . (m v2)
  if (std::abs(c) > 0.0) v2 *= std::conj(c) / std::abs(c);

  out.u.col(0) = u1;
  out.u.col(1) = u2;
  out.v.col(0) = v1;
  out.v.col(1) = v2;
  out.sigma << s1, std::abs(c);
  return out;
}

Eigen::VectorXd singular_values(const MatX& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  if (m.cols() > 2 && m.rows() > 2)
    throw std::invalid_argument("linalg: singular values only for matrices with at most two rows or columns");
  MatX a = m.cols() <= 2 ? m : MatX(m.adjoint());
  if (a.cols() == 1) return Eigen::VectorXd::Constant(1, a.norm());
  Mat2 r = Mat2::Zero();
  if (a.rows() == 1) {
    r.row(0) = a.row(0);
  } else {
    Eigen::HouseholderQR<MatX> qr(a);
    MatX full = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
    r = full;
  }
  return svd_2x2(r).sigma;
}

int numerical_rank(const MatX& m, double rel_tol) {
  Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

MatX haar_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatX z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = cd(gauss(rng), gauss(rng));
  // modified Gram-Schmidt, two passes
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) z.col(j) -= z.col(k).dot(z.col(j)) * z.col(k);
    z.col(j).normalize();
  }
  return z;
}

Mat2 pauli_x() {
  Mat2 x;
  x << 0, 1, 1, 0;
  return x;
}

}  // namespace lw
