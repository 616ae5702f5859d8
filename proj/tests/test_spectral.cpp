#include <doctest.h>

#include <cmath>
#include <vector>

#include "windingkit/spectral.hpp"

using namespace wk;

TEST_CASE("spectral differentiation is exact on bandlimited data") {
  const int n = 16;
  std::vector<double> f(n), want(n);
  for (int i = 0; i < n; i++) {
    double x = 2 * pi * i / n;
    f[i] = std::sin(x) + 0.5 * std::cos(3 * x);
    want[i] = std::cos(x) - 1.5 * std::sin(3 * x);
  }
  Circulant d = Circulant::derivative(n);
  std::vector<double> got(n);
  apply_theta(d, n, 1, f, got);
  for (int i = 0; i < n; i++) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("half-cell shifts interpolate bandlimited data exactly") {
  const int nt = 16, np = 12;
  std::vector<double> f(nt * np);
  auto fn = [](double th, double ph) { return 1.0 + std::cos(3 * th - 2 * ph) + 0.2 * std::sin(ph); };
  for (int i = 0; i < nt; i++)
    for (int j = 0; j < np; j++) f[i * np + j] = fn(2 * pi * i / nt, 2 * pi * j / np);

  auto stag = shift_plain_to_staggered(nt, np, f);
  for (int i = 0; i < nt; i++)
    for (int j = 0; j < np; j++) {
      double th = 2 * pi * (i + 0.5) / nt, ph = 2 * pi * (j + 0.5) / np;
      CHECK(stag[i * np + j] == doctest::Approx(fn(th, ph)).epsilon(1e-12));
    }

  SUBCASE("round trip returns the samples") {
    auto back = shift_staggered_to_plain(nt, np, stag);
    for (int k = 0; k < nt * np; k++) CHECK(back[k] == doctest::Approx(f[k]).epsilon(1e-12));
  }
}

TEST_CASE("nyquist line projection removes only the alternating modes") {
  const int n = 8;
  std::vector<double> f(n * n), smooth(n * n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      smooth[i * n + j] = std::cos(2 * pi * i / n) + 2.0;
      f[i * n + j] = smooth[i * n + j] + 0.7 * ((i % 2) ? -1 : 1) + 0.3 * ((j % 2) ? -1 : 1);
    }
  zero_nyquist_lines(n, n, f);
  for (int k = 0; k < n * n; k++) CHECK(f[k] == doctest::Approx(smooth[k]).epsilon(1e-12));
}

TEST_CASE("point interpolation agrees with the underlying trig polynomial") {
  const int nt = 16, np = 16;
  std::vector<double> f(nt * np);
  auto fn = [](double th, double ph) { return std::sin(2 * th) * std::cos(ph) + 0.4; };
  for (int i = 0; i < nt; i++)
    for (int j = 0; j < np; j++) f[i * np + j] = fn(2 * pi * i / nt, 2 * pi * j / np);
  CHECK(interp_point(nt, np, f, 0.33, 1.71) == doctest::Approx(fn(0.33, 1.71)).epsilon(1e-12));
  CHECK(interp_point(nt, np, f, 2 * pi * 3 / nt, 2 * pi * 5 / np) ==
        doctest::Approx(f[3 * np + 5]).epsilon(1e-12));
}

TEST_CASE("gauss-legendre quadrature on [0,1]") {
  std::vector<double> x, w;
  gauss_legendre_01(4, x, w);
  double s = 0, p4 = 0;
  for (int i = 0; i < 4; i++) {
    s += w[i];
    p4 += w[i] * std::pow(x[i], 6);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p4 == doctest::Approx(1.0 / 7.0).epsilon(1e-13));  // GL-4 exact to degree 7
}
