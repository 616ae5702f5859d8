#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "windingkit/geometry.hpp"
#include "windingkit/spectral.hpp"
#include "windingkit/targets.hpp"
#include "windingkit/volume.hpp"

using namespace wk;

namespace {

TorusSurface standard_torus() {
  TorusSurface t;
  t.major_radius = 3;
  t.minor_radius = 1;
  return t;
}

Vec3 fd_curl(const TargetField& f, const Vec3& x, double h) {
  auto d = [&](int axis) {
    Vec3 dx{axis == 0 ? h : 0.0, axis == 1 ? h : 0.0, axis == 2 ? h : 0.0};
    return (f(x + dx) - f(x - dx)) / (2 * h);
  };
  Vec3 dx = d(0), dy = d(1), dz = d(2);
  return {dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
}

double fd_div(const TargetField& f, const Vec3& x, double h) {
  auto d = [&](int axis) {
    Vec3 dx{axis == 0 ? h : 0.0, axis == 1 ? h : 0.0, axis == 2 ? h : 0.0};
    return (f(x + dx) - f(x - dx)) / (2 * h);
  };
  return d(0).x + d(1).y + d(2).z;
}

}  // namespace

TEST_CASE("azimuthal wire field") {
  TargetField b = azimuthal_wire({0, 0, 0}, {0, 0, 1});
  CHECK(norm(b({4, 0, 0}) - Vec3{0, 0.25, 0}) < 1e-14);

  SUBCASE("circulation on the rho = 4 loop is 2 pi") {
    const int n = 512;
    double s = 0;
    for (int k = 0; k < n; k++) {
      double ph = 2 * pi * k / n;
      Vec3 x{4 * std::cos(ph), 4 * std::sin(ph), 0};
      s += dot(b(x), Vec3{-std::sin(ph), std::cos(ph), 0}) * (2 * pi * 4 / n);
    }
    CHECK(s == doctest::Approx(2 * pi).epsilon(1e-10));
  }

  SUBCASE("curl-free at probes") {
    for (const Vec3& x : {Vec3{3.5, 0.4, 0.2}, Vec3{-2, 2, 1}})
      CHECK(norm(fd_curl(b, x, 1e-4)) / norm(b(x)) < 1e-6);
  }
}

TEST_CASE("point source field") {
  TargetField b = point_source_unchecked({1, 0, 0});
  CHECK(norm(b({3, 0, 0})) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(norm(b({3, 0, 0}) - Vec3{0.25, 0, 0}) < 1e-14);

  SUBCASE("flux through a small sphere is 4 pi") {
    // Gauss-Legendre in cos(theta) x uniform phi: exact sphere quadrature
    std::vector<double> gx, gw;
    gauss_legendre_01(16, gx, gw);
    const int nph = 32;
    double rho = 0.3, flux = 0;
    for (int i = 0; i < 16; i++) {
      double cz = 2 * gx[i] - 1, sz = std::sqrt(1 - cz * cz);
      for (int j = 0; j < nph; j++) {
        double ph = 2 * pi * j / nph;
        Vec3 n{sz * std::cos(ph), sz * std::sin(ph), cz};
        Vec3 x = Vec3{1, 0, 0} + rho * n;
        flux += dot(b(x), n) * rho * rho * 2 * gw[i] * (2 * pi / nph);
      }
    }
    CHECK(flux == doctest::Approx(4 * pi).epsilon(1e-6));
  }

  SUBCASE("divergence-free away from the source") {
    CHECK(std::fabs(fd_div(b, {2, 0.5, 0.3}, 1e-4)) / norm(b({2, 0.5, 0.3})) < 1e-6);
  }

  SUBCASE("placement validation") {
    TorusSurface cws = standard_torus();
    TorusSurface plasma = standard_torus();
    plasma.minor_radius = 0.5;
    CHECK_NOTHROW(point_source({3.7, 0, 0}, cws, plasma));
    CHECK_THROWS_AS(point_source({3.2, 0, 0}, cws, plasma), std::invalid_argument);  // inside plasma
    CHECK_THROWS_AS(point_source({5, 0, 0}, cws, plasma), std::invalid_argument);    // outside cws
  }
}

TEST_CASE("circular loop field") {
  double radius = 0.8, current = 2.5;
  TargetField b = circular_loop({0, 0, 0}, {0, 0, 1}, radius, current);

  SUBCASE("on-axis closed form") {
    for (double h : {0.0, 0.5, 1.7}) {
      double want = current * radius * radius / (2 * std::pow(radius * radius + h * h, 1.5));
      Vec3 got = b({0, 0, h});
      CHECK(std::fabs(got.z - want) < 1e-8 * want);
      CHECK(std::fabs(got.x) < 1e-12);
      CHECK(std::fabs(got.y) < 1e-12);
    }
  }

  SUBCASE("zero current gives the zero field") {
    TargetField z = circular_loop({0, 0, 0}, {0, 0, 1}, radius, 0.0);
    CHECK(norm(z({1, 2, 0.4})) == 0.0);
  }

  SUBCASE("far field decays like a dipole") {
    double d = 50 * radius;
    double ratio = norm(b({0, 0, d})) / norm(b({0, 0, 2 * d}));
    CHECK(std::fabs(ratio - 8.0) / 8.0 < 0.02);
  }
}

TEST_CASE("plasma neumann target") {
  TorusSurface plasma = standard_torus();
  plasma.minor_radius = 0.5;
  plasma.pose.rotation = Mat3::rotation({1, 0.5, 0}, 0.6);
  plasma.pose.translation = {0.3, -0.4, 1.2};

  TargetField b = plasma_neumann(plasma);
  SurfaceGrid boundary = build_surface(plasma, 24, 24, false);
  for (int k = 0; k < boundary.size(); k++)
    CHECK(std::fabs(dot(b(boundary.nodes[k]), boundary.normals[k])) /
              norm(b(boundary.nodes[k])) < 1e-12);

  SUBCASE("unit-norm variant has unit L2(P) norm") {
    TargetField u = plasma_neumann(plasma, true);
    double n2 = volume_integral(plasma, 1.0, 32, 48, 12,
                                [&](const Vec3& x) { return norm_sq(u(x)); });
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("circulation about the plasma core is 2 pi c") {
    TargetField u = plasma_neumann(plasma, true);
    const int n = 512;
    double s = 0;
    Vec3 e1 = plasma.pose.apply_vector({1, 0, 0});
    Vec3 e2 = plasma.pose.apply_vector({0, 1, 0});
    double rho = plasma.major_radius;
    for (int k = 0; k < n; k++) {
      double ph = 2 * pi * k / n;
      Vec3 x = plasma.axis_point() + rho * std::cos(ph) * e1 + rho * std::sin(ph) * e2;
      Vec3 t = -std::sin(ph) * e1 + std::cos(ph) * e2;
      s += dot(u(x), t) * (2 * pi * rho / n);
    }
    CHECK(s == doctest::Approx(2 * pi * u.current).epsilon(1e-8));
  }
}

TEST_CASE("all target kinds are numerically harmonic at scattered probes") {
  TorusSurface plasma = standard_torus();
  plasma.minor_radius = 0.4;
  std::vector<TargetField> fields{
      azimuthal_wire({0, 0, 0}, {0, 0, 1}), point_source_unchecked({1.2, 0.3, 0}),
      circular_loop({0, 0, 0.2}, {0.2, 0, 1}, 0.9, 1.4), plasma_neumann(plasma)};
  for (const auto& f : fields) {
    for (const Vec3& x : {Vec3{3.1, 0.3, 0.2}, Vec3{-2.8, 0.5, -0.3}, Vec3{0.4, 3.2, 0.25}}) {
      double scale = norm(f(x));
      CHECK(norm(fd_curl(f, x, 1e-4)) / scale < 1e-6);
      CHECK(std::fabs(fd_div(f, x, 1e-4)) / scale < 1e-6);
    }
  }
}
