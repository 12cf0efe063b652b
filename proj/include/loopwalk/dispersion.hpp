#pragma once

#include "loopwalk/linalg.hpp"
#include "loopwalk/optics.hpp"

#include <functional>
#include <vector>

namespace lw {

// k -> U(k) for a translation-invariant walk with a 2- or 4-dimensional internal space
struct BlochFamily {
  int dim = 4;
  std::function<Mat4(double)> op4;
  std::function<Mat2(double)> op2;

  static BlochFamily four(std::function<Mat4(double)> f) { return {4, std::move(f), {}}; }
  static BlochFamily two(std::function<Mat2(double)> f) { return {2, {}, std::move(f)}; }
};

// S(k) * coin; e^{-ik} on hops to x-1, e^{+ik} on hops to x+1
Unitary4 bloch_operator(const Unitary4& coin, double k);
Mat4 shift_operator(double k);
BlochFamily coin_family(const Unitary4& coin);

struct LocalEigen {
  std::vector<double> phase;  // ascending in [-pi, pi)
  MatX vectors;
};
LocalEigen eig_at(const BlochFamily& family, double k);

class DispersionSpectrum {
 public:
  static constexpr int kPad = 3;

  int dim() const { return dim_; }
  int n_k() const { return n_k_; }
  double dk() const { return dk_; }
  double k(int i) const;  // i may run into the padding
  const std::vector<double>& k_grid() const { return k_grid_; }

  // continuity-tracked phase; i in [-kPad, n_k + kPad)
  double omega(int branch, int i) const { return omega_[branch][i + kPad]; }
  const Eigen::VectorXcd& vector(int branch, int i) const { return vectors_[branch][i + kPad]; }
  const BlochFamily& family() const { return family_; }

 private:
  friend DispersionSpectrum assemble_spectrum(const BlochFamily&, int, std::vector<LocalEigen>&&);
  int dim_ = 0;
  int n_k_ = 0;
  double dk_ = 0;
  std::vector<double> k_grid_;
  std::vector<std::vector<double>> omega_;
  std::vector<std::vector<Eigen::VectorXcd>> vectors_;
  BlochFamily family_;
};

// per-k eigenproblems run in parallel; branch connection is one sequential pass
DispersionSpectrum band_structure(const Unitary4& coin, int n_k = 1024);
DispersionSpectrum band_structure(const BlochFamily& family, int n_k = 1024);

// sample i of the padded grid, shared by the parallel and serial sweeps
double padded_k(int n_k, int padded_index);
DispersionSpectrum assemble_spectrum(const BlochFamily& family, int n_k, std::vector<LocalEigen>&& samples);

// v[branch][i], i in [0, n_k)
std::vector<std::vector<double>> group_velocities(const DispersionSpectrum& spec);

struct Extremum {
  int branch;
  double k;
  double velocity;
};

struct WavefrontSet {
  std::vector<double> speeds;      // merged, ascending
  std::vector<int> multiplicity;   // raw extrema merged into each speed
  std::vector<Extremum> extrema;   // before merging
};

WavefrontSet wavefront_speeds(const DispersionSpectrum& spec, double tol = 1e-4);

// v_g of one branch at off-grid k, tracked from grid sample i
double local_velocity(const DispersionSpectrum& spec, int branch, int i, double k);

enum class CrossingKind { crossing, avoided };

struct GapMinimum {
  double k;
  int branch_a, branch_b;
  double gap;
  CrossingKind kind;
  bool continuum = false;  // degenerate over a run of samples
};

std::vector<GapMinimum> classify_crossings(const DispersionSpectrum& spec, double gap_tol = 1e-9);

// two-step split-step walk with SU(2) coins [[u, v], [-v*, u*]]
struct SplitStepParams {
  double u = 0;    // |u1 u2|
  double v = 0;    // Re(v1 conj(v2))
  double phi = 0;  // arg(u1 u2)

  static SplitStepParams from_coins(const Mat2& c1, const Mat2& c2);
};

Mat2 split_step_coin(cd u, cd v);
// S+(k) C2 S-(k) C1 with S+ = diag(e^{ik}, 1), S- = diag(1, e^{-ik})
Mat2 split_step_operator(const Mat2& c1, const Mat2& c2, double k);
BlochFamily split_step_family(const Mat2& c1, const Mat2& c2);

struct SplitStepBands {
  std::vector<double> k;
  std::vector<double> omega_plus, omega_minus;  // omega_minus = -omega_plus
  std::vector<double> vg_plus, vg_minus;
  std::vector<double> inflection_k;             // roots of omega'' in [-pi, pi)
  std::vector<double> speeds;                   // {-s, +s}, or {0} for flat bands
};

// cos w = u cos(k + phi) - v
double split_step_cos(const SplitStepParams& p, double k);
double split_step_velocity(const SplitStepParams& p, double k);  // + branch
SplitStepBands split_step_bands(const SplitStepParams& p, int n_k = 1024);

}  // namespace lw
