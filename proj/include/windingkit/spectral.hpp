#ifndef WINDINGKIT_SPECTRAL_HPP
#define WINDINGKIT_SPECTRAL_HPP

#include <cassert>
#include <cmath>
#include <span>
#include <vector>

#include "windingkit/vec3.hpp"

namespace wk {

// Periodic interpolation kernel on n equispaced nodes (n even), with the
// symmetric half-weight treatment of the Nyquist mode:
//   D_n(x) = sin(n x / 2) cot(x / 2) / n,  D_n(2 pi j / n) = delta_j0.
inline double dirichlet_kernel(int n, double x) {
  double s = std::sin(0.5 * x);
  if (std::fabs(s) < 1e-13) return 1.0;  // removable limit at x = 0 mod 2pi (n even)
  return std::sin(0.5 * n * x) / std::tan(0.5 * x) / n;
}

// Circulant stencils for periodic grid operations. Index convention:
// out[i] = sum_m w[m] * in[(i - m) mod n].
struct Circulant {
  int n = 0;
  std::vector<double> w;

  // Trigonometric interpolation shifted by `offset` cells (x -> x + offset*h).
  static Circulant shift(int n, double offset) {
    Circulant c;
    c.n = n;
    c.w.resize(n);
    double h = 2 * pi / n;
    for (int m = 0; m < n; m++) c.w[m] = dirichlet_kernel(n, (m + offset) * h);
    return c;
  }

  // Spectral differentiation d/dx on the periodic grid (even n).
  static Circulant derivative(int n) {
    Circulant c;
    c.n = n;
    c.w.assign(n, 0.0);
    double h = 2 * pi / n;
    for (int m = 1; m < n; m++) {
      int ms = m <= n / 2 ? m : m - n;  // symmetric representative
      if (ms == n / 2) { c.w[m] = 0.0; continue; }
      c.w[m] = 0.5 * ((ms % 2 == 0) ? 1.0 : -1.0) / std::tan(0.5 * ms * h);
      // stencil is indexed by (i - j); weight at offset m equals value for ms
    }
    return c;
  }
};

// Grid functions are stored row-major: value(i_theta, j_phi) = f[i*n_phi + j].
inline void apply_theta(const Circulant& c, int n_theta, int n_phi,
                        std::span<const double> in, std::span<double> out) {
  assert(c.n == n_theta);
  for (int i = 0; i < n_theta; i++)
    for (int j = 0; j < n_phi; j++) {
      double s = 0;
      for (int m = 0; m < n_theta; m++) s += c.w[m] * in[((i - m + n_theta) % n_theta) * n_phi + j];
      out[i * n_phi + j] = s;
    }
}

inline void apply_phi(const Circulant& c, int n_theta, int n_phi,
                      std::span<const double> in, std::span<double> out) {
  assert(c.n == n_phi);
  for (int i = 0; i < n_theta; i++)
    for (int j = 0; j < n_phi; j++) {
      double s = 0;
      for (int m = 0; m < n_phi; m++) s += c.w[m] * in[i * n_phi + (j - m + n_phi) % n_phi];
      out[i * n_phi + j] = s;
    }
}

inline std::vector<double> apply_tensor(const Circulant& ct, const Circulant& cp,
                                        int n_theta, int n_phi, std::span<const double> in) {
  std::vector<double> tmp(in.size()), out(in.size());
  apply_theta(ct, n_theta, n_phi, in, tmp);
  apply_phi(cp, n_theta, n_phi, tmp, out);
  return out;
}

// Half-cell shifts between the plain grid (nodes at i*h) and the staggered
// grid (nodes at (i+1/2)*h) of equal size.
inline std::vector<double> shift_plain_to_staggered(int nt, int np, std::span<const double> f) {
  return apply_tensor(Circulant::shift(nt, 0.5), Circulant::shift(np, 0.5), nt, np, f);
}
inline std::vector<double> shift_staggered_to_plain(int nt, int np, std::span<const double> f) {
  return apply_tensor(Circulant::shift(nt, -0.5), Circulant::shift(np, -0.5), nt, np, f);
}

// Remove the theta- and phi-Nyquist Fourier lines (even grids). The half-cell
// shifts annihilate these modes, so they carry no information between the two
// grids and are kept at zero in boundary densities.
inline void zero_nyquist_lines(int nt, int np, std::span<double> f) {
  for (int j = 0; j < np; j++) {
    double a = 0;
    for (int i = 0; i < nt; i++) a += (i % 2 ? -1.0 : 1.0) * f[i * np + j];
    a /= nt;
    for (int i = 0; i < nt; i++) f[i * np + j] -= (i % 2 ? -1.0 : 1.0) * a;
  }
  for (int i = 0; i < nt; i++) {
    double a = 0;
    for (int j = 0; j < np; j++) a += (j % 2 ? -1.0 : 1.0) * f[i * np + j];
    a /= np;
    for (int j = 0; j < np; j++) f[i * np + j] -= (j % 2 ? -1.0 : 1.0) * a;
  }
}

// Evaluate the trigonometric interpolant of a periodic grid function at an
// arbitrary parameter point. grid_offset is 0 for plain grids, 0.5 staggered.
inline double interp_point(int nt, int np, std::span<const double> f, double theta, double phi,
                           double grid_offset = 0.0) {
  double ht = 2 * pi / nt, hp = 2 * pi / np;
  double s = 0;
  for (int i = 0; i < nt; i++) {
    double wt = dirichlet_kernel(nt, theta - (i + grid_offset) * ht);
    if (wt == 0.0) continue;
    double row = 0;
    for (int j = 0; j < np; j++) row += dirichlet_kernel(np, phi - (j + grid_offset) * hp) * f[i * np + j];
    s += wt * row;
  }
  return s;
}

// Gauss-Legendre nodes/weights on [0, 1].
inline void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; i++) {
    // Newton iteration from the Chebyshev initial guess, on [-1, 1]
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; it++) {
      double p0 = 1, p1 = 0;
      for (int k = 0; k < n; k++) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1);
      double dt = p0 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    double p0 = 1, p1 = 0;
    for (int k = 0; k < n; k++) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1);
    x[i] = 0.5 * (1 - t);  // descending t -> ascending x
    w[i] = 1.0 / ((1 - t * t) * dp * dp);
  }
}

}  // namespace wk

#endif
