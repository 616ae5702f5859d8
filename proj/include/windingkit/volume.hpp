#ifndef WINDINGKIT_VOLUME_HPP
#define WINDINGKIT_VOLUME_HPP

#include "windingkit/geometry.hpp"
#include "windingkit/vec3.hpp"

namespace wk {

// Harmonic Neumann field of a solid torus: the azimuthal 1/rho field about
// the symmetry axis, Gamma(x) = c * e_phi(x) / rho(x). Curl- and
// divergence-free away from the axis and tangent to every torus that is
// axisymmetric about the same axis.
struct HarmonicNeumannField {
  Vec3 axis_point{0, 0, 0};
  Vec3 axis_direction{0, 0, 1};  // unit
  double strength = 1.0;

  // Throws std::invalid_argument when x lies on the axis.
  Vec3 operator()(const Vec3& x) const;
};

// For the given torus, the field about its own posed symmetry axis.
HarmonicNeumannField gamma_field(const TorusSurface& params, double strength = 1.0);

// ||Gamma||^2_{L2(Omega)}. Unperturbed identity-pose-equivalent tori use the
// closed form c^2 * 4 pi^2 (R0 - sqrt(R0^2 - a^2)); perturbed surfaces fall
// back to volume quadrature.
double gamma_l2_volume_norm_sq(const TorusSurface& params, double strength);

// Same quantity by tensor quadrature only (cross-check / perturbed path).
double gamma_l2_volume_norm_sq_quadrature(const TorusSurface& params, double strength,
                                          int n_r = 48, int n_theta = 64, int n_phi = 16);

// Gamma with unit L2(Omega) norm.
HarmonicNeumannField normalize_gamma(const TorusSurface& params);

}  // namespace wk

#endif
