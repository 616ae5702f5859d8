#ifndef WINDINGKIT_GEOMETRY_HPP
#define WINDINGKIT_GEOMETRY_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "windingkit/vec3.hpp"

namespace wk {

struct Pose {
  Mat3 rotation;
  Vec3 translation;

  Vec3 apply_point(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_vector(const Vec3& v) const { return rotation * v; }
  Vec3 inverse_point(const Vec3& p) const { return rotation.transposed() * (p - translation); }
};

struct ShapeMode {
  int m = 0, n = 0;
  double amplitude = 0;
};

// A toroidal surface r(theta, phi) = a + sum_k amp_k cos(m_k theta - n_k phi)
// around the major circle of radius R0, rigidly posed in space.
struct TorusSurface {
  double major_radius = 3.0;
  double minor_radius = 1.0;
  std::vector<ShapeMode> perturbation;
  Pose pose;

  // Throws std::invalid_argument when the shape or pose is unusable.
  void validate() const;

  bool is_perturbed() const { return !perturbation.empty(); }
  double radial(double theta, double phi) const;
  double radial_dtheta(double theta, double phi) const;
  double radial_dphi(double theta, double phi) const;

  Vec3 position(double theta, double phi) const;        // posed
  Vec3 tube_center(double phi) const;                   // posed center circle point
  Vec3 axis_point() const { return pose.translation; }  // posed symmetry axis
  Vec3 axis_direction() const { return pose.rotation * Vec3{0, 0, 1}; }

  // Gap between a point and the surface measured along the minor radius in
  // the surface's own frame (positive inside). A margin surrogate, not the
  // exact Euclidean distance.
  double radial_gap(const Vec3& point) const;
};

// Discretized surface. Nodes at theta_i = 2 pi (i+s)/n_theta,
// phi_j = 2 pi (j+s)/n_phi with s = 0 (plain) or 1/2 (staggered).
struct SurfaceGrid {
  TorusSurface surface;
  int n_theta = 0, n_phi = 0;
  bool staggered = false;

  std::vector<Vec3> nodes, normals, tangent_theta, tangent_phi;
  std::vector<double> metric_e, metric_f, metric_g;  // first fundamental form
  std::vector<double> area_weights;                  // |x_th x x_ph| dth dph

  int size() const { return n_theta * n_phi; }
  int index(int i, int j) const { return i * n_phi + j; }
  double offset() const { return staggered ? 0.5 : 0.0; }
  double theta(int i) const { return 2 * pi * (i + offset()) / n_theta; }
  double phi(int j) const { return 2 * pi * (j + offset()) / n_phi; }

  double total_area() const;
  double max_spacing() const;  // max physical node spacing, for accuracy guards
};

SurfaceGrid build_surface(const TorusSurface& params, int n_theta, int n_phi, bool staggered);

// Scalar samples bound to a grid.
struct ScalarGridFunction {
  std::shared_ptr<const SurfaceGrid> grid;
  std::vector<double> values;

  ScalarGridFunction() = default;
  explicit ScalarGridFunction(std::shared_ptr<const SurfaceGrid> g, double fill = 0.0)
      : grid(std::move(g)), values(grid->size(), fill) {}
};

// Spectral surface gradient of a plain-grid scalar; tangent at every node.
std::vector<Vec3> surface_gradient(const SurfaceGrid& grid, std::span<const double> f);

// Volume quadrature nodes in the shrunken solid torus (tensor product
// radial x poloidal x toroidal, Gauss-Legendre radially). When clustered,
// each base probe carries six finite-difference satellites (+-x, +-y, +-z
// at distance fd_delta) with zero quadrature weight, laid out after the
// base block.
struct ProbeSet {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int n_base = 0;
  double fd_delta = 0;

  int satellites_per_base() const { return fd_delta > 0 ? 6 : 0; }
  int total() const { return static_cast<int>(points.size()); }
  double weighted_volume() const;
};

ProbeSet interior_probes(const TorusSurface& params, double shrink, int n_r, int n_theta,
                         int n_phi, bool clusters = false, double fd_delta = 1e-4);

// Volume integral of a smooth integrand over the (possibly perturbed) solid
// torus scaled by `shrink`, with the same tensor quadrature as the probes.
double volume_integral(const TorusSurface& params, double shrink, int n_r, int n_theta, int n_phi,
                       const std::function<double(const Vec3&)>& f);

}  // namespace wk

#endif
