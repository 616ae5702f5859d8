#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "windingkit/geometry.hpp"
#include "windingkit/volume.hpp"

using namespace wk;

namespace {

TorusSurface standard_torus() {
  TorusSurface t;
  t.major_radius = 3;
  t.minor_radius = 1;
  return t;
}

Vec3 field_component_diff(const HarmonicNeumannField& f, const Vec3& x, int axis, double h) {
  Vec3 dx{axis == 0 ? h : 0.0, axis == 1 ? h : 0.0, axis == 2 ? h : 0.0};
  return (f(x + dx) - f(x - dx)) / (2 * h);
}

Vec3 fd_curl(const HarmonicNeumannField& f, const Vec3& x, double h) {
  Vec3 dx = field_component_diff(f, x, 0, h);
  Vec3 dy = field_component_diff(f, x, 1, h);
  Vec3 dz = field_component_diff(f, x, 2, h);
  return {dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
}

double fd_div(const HarmonicNeumannField& f, const Vec3& x, double h) {
  return field_component_diff(f, x, 0, h).x + field_component_diff(f, x, 1, h).y +
         field_component_diff(f, x, 2, h).z;
}

}  // namespace

TEST_CASE("gamma field values about the z-axis") {
  HarmonicNeumannField g = gamma_field(standard_torus(), 1.0);
  CHECK(norm(g({4, 0, 0}) - Vec3{0, 0.25, 0}) < 1e-14);
  CHECK(norm(g({0, 4, 0}) - Vec3{-0.25, 0, 0}) < 1e-14);
  CHECK_THROWS_AS(g({0, 0, 2}), std::invalid_argument);
}

TEST_CASE("gamma is tangent to every axisymmetric torus about its axis") {
  SurfaceGrid grid = build_surface(standard_torus(), 24, 24, false);
  HarmonicNeumannField g = gamma_field(standard_torus(), 0.7);
  for (int k = 0; k < grid.size(); k++)
    CHECK(std::fabs(dot(g(grid.nodes[k]), grid.normals[k])) < 1e-12);
}

TEST_CASE("gamma is curl- and divergence-free away from the axis") {
  HarmonicNeumannField g = gamma_field(standard_torus(), 1.0);
  for (const Vec3& x : {Vec3{3, 0.2, 0.4}, Vec3{-2.5, 1.0, -0.3}, Vec3{0.5, 3.3, 0.2}}) {
    double scale = norm(g(x));
    CHECK(norm(fd_curl(g, x, 1e-4)) / scale < 1e-6);
    CHECK(std::fabs(fd_div(g, x, 1e-4)) / scale < 1e-6);
  }
}

TEST_CASE("closed-form volume norm and its quadrature cross-check") {
  TorusSurface t = standard_torus();
  double closed = gamma_l2_volume_norm_sq(t, 1.0);
  CHECK(closed == doctest::Approx(4 * pi * pi * (3.0 - std::sqrt(8.0))).epsilon(1e-14));
  double quad = gamma_l2_volume_norm_sq_quadrature(t, 1.0);
  CHECK(std::fabs(quad - closed) / closed < 1e-8);

  SUBCASE("norm vanishes with the tube") {
    TorusSurface thin = t;
    thin.minor_radius = 1e-3;
    CHECK(gamma_l2_volume_norm_sq(thin, 1.0) < 1e-5);
  }

  SUBCASE("explicit normalization constant") {
    double c = 1.0 / std::sqrt(closed);
    CHECK(gamma_l2_volume_norm_sq(t, c) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("normalize_gamma produces a unit-norm field, idempotently") {
  TorusSurface t = standard_torus();
  HarmonicNeumannField g = normalize_gamma(t);
  CHECK(gamma_l2_volume_norm_sq(t, g.strength) == doctest::Approx(1.0).epsilon(1e-10));

  double again = g.strength / std::sqrt(gamma_l2_volume_norm_sq(t, g.strength));
  CHECK(std::fabs(again - g.strength) < 1e-12);
}

TEST_CASE("gamma circulation around a toroidal loop equals 2 pi c") {
  HarmonicNeumannField g = gamma_field(standard_torus(), 1.3);
  const int n = 256;
  double s = 0;
  for (int k = 0; k < n; k++) {
    double ph = 2 * pi * k / n;
    Vec3 x{4 * std::cos(ph), 4 * std::sin(ph), 0};
    Vec3 t{-std::sin(ph), std::cos(ph), 0};
    s += dot(g(x), t) * (2 * pi * 4 / n);
  }
  CHECK(std::fabs(s - 2 * pi * 1.3) / (2 * pi * 1.3) < 1e-8);
}

TEST_CASE("perturbed-surface quadrature path agrees with the closed form at zero amplitude") {
  TorusSurface t = standard_torus();
  t.perturbation = {{2, 1, 0.0}};
  double quad = gamma_l2_volume_norm_sq(t, 1.0);
  double closed = 4 * pi * pi * (3.0 - std::sqrt(8.0));
  CHECK(std::fabs(quad - closed) / closed < 1e-8);
}
