#include "windingkit/volume.hpp"

#include <cmath>
#include <stdexcept>

namespace wk {

Vec3 HarmonicNeumannField::operator()(const Vec3& x) const {
  Vec3 d = x - axis_point;
  Vec3 radial = d - dot(d, axis_direction) * axis_direction;
  double rho2 = norm_sq(radial);
  if (rho2 < 1e-24) throw std::invalid_argument("HarmonicNeumannField: point on the axis");
  // e_phi / rho = (axis x radial) / rho^2
  return (strength / rho2) * cross(axis_direction, radial);
}

HarmonicNeumannField gamma_field(const TorusSurface& params, double strength) {
  return {params.axis_point(), params.axis_direction(), strength};
}

double gamma_l2_volume_norm_sq(const TorusSurface& params, double strength) {
  if (!params.is_perturbed()) {
    double r0 = params.major_radius, a = params.minor_radius;
    return strength * strength * 4 * pi * pi * (r0 - std::sqrt(r0 * r0 - a * a));
  }
  return gamma_l2_volume_norm_sq_quadrature(params, strength);
}

double gamma_l2_volume_norm_sq_quadrature(const TorusSurface& params, double strength,
                                          int n_r, int n_theta, int n_phi) {
  HarmonicNeumannField gamma = gamma_field(params, strength);
  // the integrand is smooth up to the surface, so the full tube is fine
  return volume_integral(params, 1.0, n_r, n_theta, n_phi,
                         [&](const Vec3& x) { return norm_sq(gamma(x)); });
}

HarmonicNeumannField normalize_gamma(const TorusSurface& params) {
  double n2 = gamma_l2_volume_norm_sq(params, 1.0);
  return gamma_field(params, 1.0 / std::sqrt(n2));
}

}  // namespace wk
