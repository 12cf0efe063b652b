#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace lw {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using MatX = Eigen::MatrixXcd;

inline constexpr double kTolUnitary = 1e-10;
inline constexpr double kRankTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

// certification failures (non-unitary payloads, failed rank tests, ...)
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double unitarity_error(const MatX& a);
bool is_unitary(const MatX& a, double tol = kTolUnitary);
bool all_finite(const MatX& a);

template <int N>
class Unitary {
 public:
  using Matrix = Eigen::Matrix<cd, N, N>;

  explicit Unitary(const Matrix& m, double tol = kTolUnitary) : m_(m) {
    if (!all_finite(m_)) throw NumericalError("linalg: non-finite matrix entry");
    double err = unitarity_error(m_);
    if (err > tol)
      throw NumericalError("linalg: matrix is not unitary (max |U^dag U - 1| = " +
                           std::to_string(err) + ")");
  }

  static Unitary identity() { return Unitary(Matrix::Identity(), Trusted{}); }
  // product/adjoint of certified unitaries; skips the check
  static Unitary trusted(const Matrix& m) { return Unitary(m, Trusted{}); }

  const Matrix& matrix() const { return m_; }
  cd operator()(int i, int j) const { return m_(i, j); }
  Unitary adjoint() const { return Unitary(m_.adjoint(), Trusted{}); }

  friend Unitary operator*(const Unitary& a, const Unitary& b) {
    return Unitary(a.m_ * b.m_, Trusted{});
  }

 private:
  struct Trusted {};
  Unitary(const Matrix& m, Trusted) : m_(m) {}
  Matrix m_;
};

using Unitary2 = Unitary<2>;
using Unitary4 = Unitary<4>;

// unit-modulus scalar times a unitary
template <int N>
Unitary<N> rephase(cd phase, const Unitary<N>& u) {
  if (std::abs(std::abs(phase) - 1.0) > 1e-12) throw NumericalError("linalg: phase is not unit modulus");
  return Unitary<N>::trusted(phase * u.matrix());
}

MatX mat_mul(const MatX& a, const MatX& b);
MatX dagger(const MatX& a);
double max_abs_diff(const MatX& a, const MatX& b);
// min over global phases of max |a - e^{i t} b|, phase taken from the largest entry of b
double diff_up_to_phase(const MatX& a, const MatX& b);

template <int N>
struct Eigensystem {
  std::array<double, N> phase;       // ascending, in [-pi, pi)
  Eigen::Matrix<cd, N, N> vectors;   // column j belongs to phase[j]
};

double wrap_phase(double w);  // into [-pi, pi)

template <int N>
Eigensystem<N> eig_unitary(const Unitary<N>& u);

extern template Eigensystem<2> eig_unitary<2>(const Unitary<2>&);
extern template Eigensystem<4> eig_unitary<4>(const Unitary<4>&);

struct Svd2 {
  Mat2 u;
  Eigen::Vector2d sigma;  // sigma(0) >= sigma(1) >= 0
  Mat2 v;                 // m = u * diag(sigma) * v^dag
};

Svd2 svd_2x2(const Mat2& m);

// singular values of a matrix with at most two rows or two columns, descending
Eigen::VectorXd singular_values(const MatX& m);
int numerical_rank(const MatX& m, double rel_tol = kRankTol);

// Haar-distributed unitary via Gram-Schmidt of a complex Gaussian matrix
MatX haar_matrix(int n, std::mt19937_64& rng);

template <int N>
Unitary<N> haar_unitary(std::mt19937_64& rng) {
  return Unitary<N>(Eigen::Matrix<cd, N, N>(haar_matrix(N, rng)), 1e-12);
}

Mat2 pauli_x();

}  // namespace lw
