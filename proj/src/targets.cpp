#include "windingkit/targets.hpp"

#include <cmath>
#include <stdexcept>

#include "windingkit/volume.hpp"

namespace wk {

Vec3 TargetField::operator()(const Vec3& x) const {
  switch (kind) {
    case Kind::azimuthal_wire:
    case Kind::plasma_neumann: {
      Vec3 d = x - point;
      Vec3 radial = d - dot(d, direction) * direction;
      double rho2 = norm_sq(radial);
      if (rho2 < 1e-24) throw std::invalid_argument("TargetField: point on the axis");
      return (current / rho2) * cross(direction, radial);
    }
    case Kind::point_source: {
      Vec3 d = x - point;
      double r2 = norm_sq(d);
      if (r2 < 1e-24) throw std::invalid_argument("TargetField: point at the source");
      return d / (r2 * std::sqrt(r2));
    }
    case Kind::circular_loop: {
      // orthonormal frame (u, v, direction) spanning the loop plane
      Vec3 u = std::fabs(direction.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
      u = normalized(u - dot(u, direction) * direction);
      Vec3 v = cross(direction, u);
      Vec3 b{};
      const double dt = 2 * pi / loop_quadrature;
      for (int k = 0; k < loop_quadrature; k++) {
        double t = dt * k;
        Vec3 y = point + radius * (std::cos(t) * u + std::sin(t) * v);
        Vec3 dl = radius * (-std::sin(t) * u + std::cos(t) * v);
        Vec3 d = x - y;
        double r2 = norm_sq(d);
        if (r2 < 1e-24) throw std::invalid_argument("TargetField: point on the loop");
        b += (dt / (r2 * std::sqrt(r2))) * cross(dl, d);
      }
      return (current / (4 * pi)) * b;
    }
  }
  return {};
}

std::vector<Vec3> TargetField::sample(std::span<const Vec3> points) const {
  std::vector<Vec3> out(points.size());
  for (std::size_t i = 0; i < points.size(); i++) out[i] = (*this)(points[i]);
  return out;
}

TargetField azimuthal_wire(const Vec3& axis_point, const Vec3& axis_direction) {
  TargetField t;
  t.kind = TargetField::Kind::azimuthal_wire;
  t.point = axis_point;
  t.direction = normalized(axis_direction);
  t.current = 1.0;
  return t;
}

TargetField point_source_unchecked(const Vec3& x0) {
  TargetField t;
  t.kind = TargetField::Kind::point_source;
  t.point = x0;
  return t;
}

TargetField point_source(const Vec3& x0, const TorusSurface& cws, const TorusSurface& plasma) {
  if (cws.radial_gap(x0) <= 0)
    throw std::invalid_argument("point_source: x0 lies outside the coil-winding volume");
  if (plasma.radial_gap(x0) >= 0)
    throw std::invalid_argument("point_source: x0 lies inside the closed plasma domain");
  return point_source_unchecked(x0);
}

TargetField circular_loop(const Vec3& center, const Vec3& axis, double radius, double current) {
  if (!(radius > 0)) throw std::invalid_argument("circular_loop: radius must be positive");
  TargetField t;
  t.kind = TargetField::Kind::circular_loop;
  t.point = center;
  t.direction = normalized(axis);
  t.radius = radius;
  t.current = current;
  return t;
}

TargetField plasma_neumann(const TorusSurface& plasma, bool unit_norm) {
  TargetField t;
  t.kind = TargetField::Kind::plasma_neumann;
  t.point = plasma.axis_point();
  t.direction = plasma.axis_direction();
  t.current = unit_norm ? 1.0 / std::sqrt(gamma_l2_volume_norm_sq(plasma, 1.0)) : 1.0;
  return t;
}

}  // namespace wk
