#include "loopwalk/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lw {

namespace {

constexpr double kSecondDiffFloor = 1e-12;  // grid second differences below this are noise
constexpr double kCurvatureStep = 2e-4;
constexpr double kVelocityStep = 1e-3;
constexpr double kRootBracket = 1e-8;

template <int N>
LocalEigen to_local(const Eigensystem<N>& e) {
  LocalEigen out;
  out.phase.assign(e.phase.begin(), e.phase.end());
  out.vectors = e.vectors;
  return out;
}

// indices of the eigenvectors in `e` best matching each reference, greedy on overlap
std::vector<int> match(const std::vector<const Eigen::VectorXcd*>& refs, const LocalEigen& e) {
  const int nr = static_cast<int>(refs.size());
  const int ne = static_cast<int>(e.phase.size());
  Eigen::MatrixXd ov(nr, ne);
  for (int a = 0; a < nr; ++a)
    for (int m = 0; m < ne; ++m) ov(a, m) = std::norm(refs[a]->dot(e.vectors.col(m)));
  std::vector<int> pick(nr, -1);
  std::vector<bool> used_r(nr, false), used_e(ne, false);
  for (int round = 0; round < nr; ++round) {
    double best = -1;
    int ba = -1, bm = -1;
    for (int a = 0; a < nr; ++a) {
      if (used_r[a]) continue;
      for (int m = 0; m < ne; ++m)
        if (!used_e[m] && ov(a, m) > best) {
          best = ov(a, m);
          ba = a;
          bm = m;
        }
    }
    used_r[ba] = true;
    used_e[bm] = true;
    pick[ba] = bm;
  }
  return pick;
}

double follow(double previous, double phase) { return previous + wrap_phase(phase - previous); }

// phase of one branch at off-grid k, continued from grid sample i
double local_phase(const DispersionSpectrum& spec, int branch, int i, double k) {
  LocalEigen e = eig_at(spec.family(), k);
  int m = match({&spec.vector(branch, i)}, e)[0];
  return follow(spec.omega(branch, i), e.phase[m]);
}

double local_curvature(const DispersionSpectrum& spec, int branch, int i, double k) {
  const double h = kCurvatureStep;
  return (local_phase(spec, branch, i, k + h) - 2 * local_phase(spec, branch, i, k) +
          local_phase(spec, branch, i, k - h)) /
         (h * h);
}

// signed wrapped difference of two branches at off-grid k
double local_split(const DispersionSpectrum& spec, int a, int b, int i, double k) {
  LocalEigen e = eig_at(spec.family(), k);
  std::vector<int> m = match({&spec.vector(a, i), &spec.vector(b, i)}, e);
  return wrap_phase(e.phase[m[0]] - e.phase[m[1]]);
}

}  // namespace

Mat4 shift_operator(double k) {
  const cd down = std::polar(1.0, -k), up = std::polar(1.0, k);
  Mat4 s = Mat4::Zero();
  s(ccH, cH) = down;
  s(ccV, cV) = up;
  s(cH, ccH) = up;
  s(cV, ccV) = down;
  return s;
}

Unitary4 bloch_operator(const Unitary4& coin, double k) { return Unitary4::trusted(shift_operator(k) * coin.matrix()); }

BlochFamily coin_family(const Unitary4& coin) {
  Mat4 c = coin.matrix();
  return BlochFamily::four([c](double k) { return Mat4(shift_operator(k) * c); });
}

LocalEigen eig_at(const BlochFamily& family, double k) {
  if (family.dim == 4) return to_local(eig_unitary(Unitary4::trusted(family.op4(k))));
  if (family.dim == 2) return to_local(eig_unitary(Unitary2::trusted(family.op2(k))));
  throw std::invalid_argument("dispersion: unsupported internal dimension");
}

double DispersionSpectrum::k(int i) const { return padded_k(n_k_, i + kPad); }

double padded_k(int n_k, int padded_index) {
  const double dk = 2 * kPi / n_k;
  return -kPi + (padded_index - DispersionSpectrum::kPad) * dk;
}

DispersionSpectrum assemble_spectrum(const BlochFamily& family, int n_k, std::vector<LocalEigen>&& samples) {
  DispersionSpectrum s;
  s.dim_ = family.dim;
  s.n_k_ = n_k;
  s.dk_ = 2 * kPi / n_k;
  s.family_ = family;
  const int n_tot = static_cast<int>(samples.size());
  s.k_grid_.resize(n_k);
  for (int i = 0; i < n_k; ++i) s.k_grid_[i] = padded_k(n_k, i + DispersionSpectrum::kPad);

  const int d = family.dim;
  s.omega_.assign(d, std::vector<double>(n_tot));
  s.vectors_.assign(d, std::vector<Eigen::VectorXcd>(n_tot));
  for (int j = 0; j < d; ++j) {
    s.omega_[j][0] = samples[0].phase[j];
    s.vectors_[j][0] = samples[0].vectors.col(j);
  }
  std::vector<const Eigen::VectorXcd*> refs(d);
  for (int i = 1; i < n_tot; ++i) {
    for (int j = 0; j < d; ++j) refs[j] = &s.vectors_[j][i - 1];
    std::vector<int> m = match(refs, samples[i]);
    for (int j = 0; j < d; ++j) {
      s.omega_[j][i] = follow(s.omega_[j][i - 1], samples[i].phase[m[j]]);
      s.vectors_[j][i] = samples[i].vectors.col(m[j]);
    }
  }
  return s;
}

DispersionSpectrum band_structure(const Unitary4& coin, int n_k) { return band_structure(coin_family(coin), n_k); }

DispersionSpectrum band_structure(const BlochFamily& family, int n_k) {
  if (n_k < 64) throw std::invalid_argument("dispersion: n_k must be at least 64");
  const int n_tot = n_k + 2 * DispersionSpectrum::kPad;
  std::vector<LocalEigen> samples(n_tot);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_tot; ++i) samples[i] = eig_at(family, padded_k(n_k, i));
  return assemble_spectrum(family, n_k, std::move(samples));
}

std::vector<std::vector<double>> group_velocities(const DispersionSpectrum& spec) {
  const double dk = spec.dk();
  std::vector<std::vector<double>> v(spec.dim(), std::vector<double>(spec.n_k()));
  for (int j = 0; j < spec.dim(); ++j)
    for (int i = 0; i < spec.n_k(); ++i) {
      double d1 = (spec.omega(j, i + 1) - spec.omega(j, i - 1)) / (2 * dk);
      double d2 = (spec.omega(j, i + 2) - spec.omega(j, i - 2)) / (4 * dk);
      v[j][i] = (4 * d1 - d2) / 3;
    }
  return v;
}

double local_velocity(const DispersionSpectrum& spec, int branch, int i, double k) {
  const double h = kVelocityStep;
  auto w = [&](double kk) { return local_phase(spec, branch, i, kk); };
  double d1 = (w(k + h) - w(k - h)) / (2 * h);
  double d2 = (w(k + 2 * h) - w(k - 2 * h)) / (4 * h);
  return (4 * d1 - d2) / 3;
}

WavefrontSet wavefront_speeds(const DispersionSpectrum& spec, double tol) {
  struct Candidate {
    int branch, i;
    double d_lo, d_hi;
  };
  std::vector<Candidate> cands;
  std::vector<Extremum> flat;
  const int n = spec.n_k();
  for (int j = 0; j < spec.dim(); ++j) {
    std::vector<double> d2(n + 1);
    double peak = 0;
    for (int i = 0; i <= n; ++i) {
      d2[i] = spec.omega(j, i + 1) - 2 * spec.omega(j, i) + spec.omega(j, i - 1);
      peak = std::max(peak, std::abs(d2[i]));
    }
    if (peak < kSecondDiffFloor) {
      // straight band: every k is extremal
      double v = (spec.omega(j, n) - spec.omega(j, 0)) / (2 * kPi);
      flat.push_back({j, spec.k(0), v});
      continue;
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(d2[i]) + std::abs(d2[i + 1]) < kSecondDiffFloor) continue;
      if ((d2[i] < 0 && d2[i + 1] > 0) || (d2[i] > 0 && d2[i + 1] < 0) || (d2[i] == 0 && d2[i + 1] != 0))
        cands.push_back({j, i, d2[i], d2[i + 1]});
    }
  }

  std::vector<Extremum> found(cands.size());
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < static_cast<int>(cands.size()); ++c) {
    const Candidate& cd_ = cands[c];
    double a = spec.k(cd_.i), b = spec.k(cd_.i + 1);
    double fa = local_curvature(spec, cd_.branch, cd_.i, a);
    double fb = local_curvature(spec, cd_.branch, cd_.i, b);
    double root;
    if ((fa < 0) != (fb < 0)) {
      while (b - a > kRootBracket) {
        double mid = 0.5 * (a + b);
        double fm = local_curvature(spec, cd_.branch, cd_.i, mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      root = 0.5 * (a + b);
    } else {
      root = a + (b - a) * cd_.d_lo / (cd_.d_lo - cd_.d_hi);
    }
    found[c] = {cd_.branch, root, local_velocity(spec, cd_.branch, cd_.i, root)};
  }
  found.insert(found.end(), flat.begin(), flat.end());

  WavefrontSet out;
  out.extrema = found;
  std::vector<double> v;
  for (const auto& e : found) v.push_back(e.velocity);
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i + 1;
    double sum = v[i];
    while (j < v.size() && v[j] - v[j - 1] < tol) sum += v[j++];
    out.speeds.push_back(sum / static_cast<double>(j - i));
    out.multiplicity.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

std::vector<GapMinimum> classify_crossings(const DispersionSpectrum& spec, double gap_tol) {
  std::vector<GapMinimum> out;
  const int n = spec.n_k();
  for (int a = 0; a < spec.dim(); ++a)
    for (int b = a + 1; b < spec.dim(); ++b) {
      auto split = [&](int i) { return wrap_phase(spec.omega(a, i) - spec.omega(b, i)); };
      auto gap = [&](int i) { return std::abs(split(i)); };
      bool in_run = false;
      for (int i = 0; i < n; ++i) {
        const double g = gap(i);
        if (g <= gap_tol) {
          // degenerate on the grid itself
          if (!in_run) {
            bool run = gap(i + 1) <= gap_tol || gap(i - 1) <= gap_tol;
            out.push_back({spec.k(i), a, b, g, CrossingKind::crossing, run});
          }
          in_run = true;
          continue;
        }
        in_run = false;
        if (!(g <= gap(i - 1) && g <= gap(i + 1))) continue;

        double best = g, best_k = spec.k(i);
        const double s_lo = split(i - 1), s_mid = split(i), s_hi = split(i + 1);
        int lo = -2;
        if ((s_lo < 0) != (s_mid < 0)) lo = i - 1;
        else if ((s_mid < 0) != (s_hi < 0)) lo = i;
        if (lo != -2) {
          double x0 = spec.k(lo), x1 = spec.k(lo + 1);
          double f0 = local_split(spec, a, b, i, x0);
          for (int it = 0; it < 200 && x1 - x0 > 1e-15; ++it) {
            double xm = 0.5 * (x0 + x1);
            double fm = local_split(spec, a, b, i, xm);
            if ((fm < 0) == (f0 < 0)) {
              x0 = xm;
              f0 = fm;
            } else {
              x1 = xm;
            }
          }
          for (double x : {x0, x1}) {
            double gx = std::abs(local_split(spec, a, b, i, x));
            if (gx < best) {
              best = gx;
              best_k = x;
            }
          }
        } else {
          // golden section on |split| around the sample
          const double r = 0.5 * (std::sqrt(5.0) - 1);
          double x0 = spec.k(i - 1), x3 = spec.k(i + 1);
          double x1 = x3 - r * (x3 - x0), x2 = x0 + r * (x3 - x0);
          double g1 = std::abs(local_split(spec, a, b, i, x1));
          double g2 = std::abs(local_split(spec, a, b, i, x2));
          for (int it = 0; it < 80; ++it) {
            if (g1 < g2) {
              x3 = x2;
              x2 = x1;
              g2 = g1;
              x1 = x3 - r * (x3 - x0);
              g1 = std::abs(local_split(spec, a, b, i, x1));
            } else {
              x0 = x1;
              x1 = x2;
              g1 = g2;
              x2 = x0 + r * (x3 - x0);
              g2 = std::abs(local_split(spec, a, b, i, x2));
            }
          }
          if (std::min(g1, g2) < best) {
            best = std::min(g1, g2);
            best_k = g1 < g2 ? x1 : x2;
          }
        }
        out.push_back({best_k, a, b, best, best <= gap_tol ? CrossingKind::crossing : CrossingKind::avoided, false});
      }
    }
  return out;
}

SplitStepParams SplitStepParams::from_coins(const Mat2& c1, const Mat2& c2) {
  const cd u1 = c1(0, 0), v1 = c1(0, 1), u2 = c2(0, 0), v2 = c2(0, 1);
  return {std::abs(u1 * u2), (v1 * std::conj(v2)).real(), std::arg(u1 * u2)};
}

Mat2 split_step_coin(cd u, cd v) {
  Mat2 c;
  c << u, v, -std::conj(v), std::conj(u);
  return c;
}

Mat2 split_step_operator(const Mat2& c1, const Mat2& c2, double k) {
  Mat2 sp = Mat2::Identity(), sm = Mat2::Identity();
  sp(0, 0) = std::polar(1.0, k);
  sm(1, 1) = std::polar(1.0, -k);
  return sp * c2 * sm * c1;
}

BlochFamily split_step_family(const Mat2& c1, const Mat2& c2) {
  return BlochFamily::two([c1, c2](double k) { return split_step_operator(c1, c2, k); });
}

double split_step_cos(const SplitStepParams& p, double k) { return p.u * std::cos(k + p.phi) - p.v; }

double split_step_velocity(const SplitStepParams& p, double k) {
  const double c = split_step_cos(p, k);
  const double den = std::sqrt(std::max(0.0, 1 - c * c));
  if (den == 0.0) return 0.0;
  return p.u * std::sin(k + p.phi) / den;
}

SplitStepBands split_step_bands(const SplitStepParams& p, int n_k) {
  if (!(p.u >= 0 && p.u <= 1 + 1e-12 && std::abs(p.v) <= 1 + 1e-12))
    throw std::invalid_argument("dispersion: split-step parameters out of range");
  SplitStepBands out;
  for (int i = 0; i < n_k; ++i) {
    double k = -kPi + 2 * kPi * i / n_k;
    double w = std::acos(std::clamp(split_step_cos(p, k), -1.0, 1.0));
    double v = split_step_velocity(p, k);
    out.k.push_back(k);
    out.omega_plus.push_back(w);
    out.omega_minus.push_back(-w);
    out.vg_plus.push_back(v);
    out.vg_minus.push_back(-v);
  }

  if (p.u == 0.0) {
    out.speeds = {0.0};
    return out;
  }
  std::vector<double> cosines;
  if (std::abs(p.u * p.v) < 1e-15) {
    cosines = {0.0};
  } else {
    const double a = (p.u * p.u + p.v * p.v - 1) / (2 * p.u * p.v);
    const double root = std::sqrt(std::max(0.0, a * a - 1));
    for (double c : {a - root, a + root})
      if (std::abs(c) <= 1 + 1e-12) cosines.push_back(std::clamp(c, -1.0, 1.0));
  }
  double s = 0;
  for (double c : cosines)
    for (double sign : {-1.0, 1.0}) {
      double k = wrap_phase(sign * std::acos(c) - p.phi);
      out.inflection_k.push_back(k);
      s = std::max(s, std::abs(split_step_velocity(p, k)));
    }
  std::sort(out.inflection_k.begin(), out.inflection_k.end());
  out.speeds = {-s, s};
  return out;
}

}  // namespace lw
