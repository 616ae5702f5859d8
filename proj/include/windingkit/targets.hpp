#ifndef WINDINGKIT_TARGETS_HPP
#define WINDINGKIT_TARGETS_HPP

#include <span>
#include <vector>

#include "windingkit/geometry.hpp"
#include "windingkit/vec3.hpp"

namespace wk {

// Analytic harmonic target fields B_T.
struct TargetField {
  enum class Kind { azimuthal_wire, point_source, circular_loop, plasma_neumann };

  Kind kind = Kind::azimuthal_wire;
  Vec3 point{};        // axis point / source location / loop center
  Vec3 direction{0, 0, 1};  // axis (unit)
  double radius = 1;   // loop radius
  double current = 1;  // loop current / field scale factor
  int loop_quadrature = 512;

  Vec3 operator()(const Vec3& x) const;
  std::vector<Vec3> sample(std::span<const Vec3> points) const;
};

// B(x) = e_phi(x)/rho(x) about the given axis.
TargetField azimuthal_wire(const Vec3& axis_point, const Vec3& axis_direction);

// B(x) = (x - x0)/|x - x0|^3; x0 must lie inside the coil-winding volume and
// outside the closed plasma domain (throws std::invalid_argument otherwise).
TargetField point_source(const Vec3& x0, const TorusSurface& cws, const TorusSurface& plasma);
TargetField point_source_unchecked(const Vec3& x0);

// Filamentary circular loop field by trapezoidal quadrature of the loop
// Biot-Savart integral.
TargetField circular_loop(const Vec3& center, const Vec3& axis, double radius, double current);

// The harmonic Neumann field of the plasma torus, extended to its analytic
// domain: the azimuthal wire field about the plasma's posed symmetry axis.
// unit_norm scales it to ||B||_{L2(P)} = 1.
TargetField plasma_neumann(const TorusSurface& plasma, bool unit_norm = false);

}  // namespace wk

#endif
