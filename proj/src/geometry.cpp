#include "windingkit/geometry.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "windingkit/spectral.hpp"

namespace wk {

void TorusSurface::validate() const {
  if (!(minor_radius > 0) || !(major_radius > minor_radius))
    throw std::invalid_argument("TorusSurface: need R0 > a > 0");
  double amp = 0;
  for (const auto& p : perturbation) amp += std::fabs(p.amplitude);
  if (!(minor_radius + amp < major_radius))
    throw std::invalid_argument("TorusSurface: perturbed radius may touch the axis (a + sum|amp| >= R0)");
  if (minor_radius - amp <= 0)
    throw std::invalid_argument("TorusSurface: perturbed radius may vanish");
  if (pose.rotation.orthonormality_defect() > 1e-12 || std::fabs(pose.rotation.det() - 1.0) > 1e-12)
    throw std::invalid_argument("TorusSurface: pose rotation must be orthonormal with det +1");
}

double TorusSurface::radial(double theta, double phi) const {
  double r = minor_radius;
  for (const auto& p : perturbation) r += p.amplitude * std::cos(p.m * theta - p.n * phi);
  return r;
}

double TorusSurface::radial_dtheta(double theta, double phi) const {
  double r = 0;
  for (const auto& p : perturbation) r -= p.amplitude * p.m * std::sin(p.m * theta - p.n * phi);
  return r;
}

double TorusSurface::radial_dphi(double theta, double phi) const {
  double r = 0;
  for (const auto& p : perturbation) r += p.amplitude * p.n * std::sin(p.m * theta - p.n * phi);
  return r;
}

Vec3 TorusSurface::position(double theta, double phi) const {
  double r = radial(theta, phi);
  double w = major_radius + r * std::cos(theta);
  Vec3 local{w * std::cos(phi), w * std::sin(phi), r * std::sin(theta)};
  return pose.apply_point(local);
}

Vec3 TorusSurface::tube_center(double phi) const {
  return pose.apply_point({major_radius * std::cos(phi), major_radius * std::sin(phi), 0});
}

double TorusSurface::radial_gap(const Vec3& point) const {
  Vec3 p = pose.inverse_point(point);
  double rho = std::hypot(p.x, p.y);
  double phi = std::atan2(p.y, p.x);
  double theta = std::atan2(p.z, rho - major_radius);
  double d = std::hypot(rho - major_radius, p.z);
  return radial(theta, phi) - d;
}

double SurfaceGrid::total_area() const {
  double s = 0;
  for (double w : area_weights) s += w;
  return s;
}

double SurfaceGrid::max_spacing() const {
  double ht = 2 * pi / n_theta, hp = 2 * pi / n_phi;
  double s = 0;
  for (int k = 0; k < size(); k++) {
    s = std::max(s, norm(tangent_theta[k]) * ht);
    s = std::max(s, norm(tangent_phi[k]) * hp);
  }
  return s;
}

SurfaceGrid build_surface(const TorusSurface& params, int n_theta, int n_phi, bool staggered) {
  params.validate();
  if (n_theta < 8 || n_phi < 8 || n_theta % 2 || n_phi % 2)
    throw std::invalid_argument("build_surface: node counts must be even and >= 8");

  SurfaceGrid g;
  g.surface = params;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.staggered = staggered;
  const int n = n_theta * n_phi;
  g.nodes.resize(n);
  g.normals.resize(n);
  g.tangent_theta.resize(n);
  g.tangent_phi.resize(n);
  g.metric_e.resize(n);
  g.metric_f.resize(n);
  g.metric_g.resize(n);
  g.area_weights.resize(n);

  const double dth = 2 * pi / n_theta, dph = 2 * pi / n_phi;
  for (int i = 0; i < n_theta; i++) {
    double th = g.theta(i);
    double ct = std::cos(th), st = std::sin(th);
    for (int j = 0; j < n_phi; j++) {
      double ph = g.phi(j);
      double cp = std::cos(ph), sp = std::sin(ph);
      int k = g.index(i, j);

      double r = params.radial(th, ph);
      double rt = params.radial_dtheta(th, ph);
      double rp = params.radial_dphi(th, ph);
      double w = params.major_radius + r * ct;

      Vec3 xt{(rt * ct - r * st) * cp, (rt * ct - r * st) * sp, rt * st + r * ct};
      Vec3 xp{rp * ct * cp - w * sp, rp * ct * sp + w * cp, rp * st};
      Vec3 nr = cross(xp, xt);  // outward for this parameterization
      double jac = norm(nr);

      g.nodes[k] = params.pose.apply_point({w * cp, w * sp, r * st});
      g.tangent_theta[k] = params.pose.apply_vector(xt);
      g.tangent_phi[k] = params.pose.apply_vector(xp);
      g.normals[k] = params.pose.apply_vector(nr / jac);
      g.metric_e[k] = dot(xt, xt);
      g.metric_f[k] = dot(xt, xp);
      g.metric_g[k] = dot(xp, xp);
      g.area_weights[k] = jac * dth * dph;
    }
  }
  return g;
}

std::vector<Vec3> surface_gradient(const SurfaceGrid& grid, std::span<const double> f) {
  if (grid.staggered)
    throw std::invalid_argument("surface_gradient: expects the plain (unstaggered) grid");
  if (static_cast<int>(f.size()) != grid.size())
    throw std::invalid_argument("surface_gradient: value count does not match the grid");

  const int nt = grid.n_theta, np = grid.n_phi;
  std::vector<double> ft(f.size()), fp(f.size());
  apply_theta(Circulant::derivative(nt), nt, np, f, ft);
  apply_phi(Circulant::derivative(np), nt, np, f, fp);

  std::vector<Vec3> out(grid.size());
  for (int k = 0; k < grid.size(); k++) {
    double e = grid.metric_e[k], fm = grid.metric_f[k], gg = grid.metric_g[k];
    double det = e * gg - fm * fm;
    out[k] = ((gg * ft[k] - fm * fp[k]) * grid.tangent_theta[k] +
              (e * fp[k] - fm * ft[k]) * grid.tangent_phi[k]) /
             det;
  }
  return out;
}

double ProbeSet::weighted_volume() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

ProbeSet interior_probes(const TorusSurface& params, double shrink, int n_r, int n_theta,
                         int n_phi, bool clusters, double fd_delta) {
  params.validate();
  if (!(shrink > 0) || !(shrink < 1)) throw std::invalid_argument("interior_probes: need 0 < shrink < 1");
  if (n_r < 1 || n_theta < 1 || n_phi < 1) throw std::invalid_argument("interior_probes: bad counts");

  std::vector<double> gx, gw;
  gauss_legendre_01(n_r, gx, gw);

  ProbeSet ps;
  ps.n_base = n_r * n_theta * n_phi;
  ps.fd_delta = clusters ? fd_delta : 0;
  ps.points.reserve(ps.n_base * (clusters ? 7 : 1));
  ps.weights.reserve(ps.points.capacity());

  const double dth = 2 * pi / n_theta, dph = 2 * pi / n_phi;
  for (int ir = 0; ir < n_r; ir++)
    for (int i = 0; i < n_theta; i++)
      for (int j = 0; j < n_phi; j++) {
        double th = dth * i, ph = dph * j;
        double s = shrink * params.radial(th, ph);
        double r = s * gx[ir];
        double w = params.major_radius + r * std::cos(th);
        Vec3 local{w * std::cos(ph), w * std::sin(ph), r * std::sin(th)};
        ps.points.push_back(params.pose.apply_point(local));
        ps.weights.push_back(gw[ir] * s * r * w * dth * dph);
      }
  if (clusters) {
    const Vec3 dirs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (int b = 0; b < ps.n_base; b++)
      for (const auto& d : dirs) {
        ps.points.push_back(ps.points[b] + fd_delta * d);
        ps.weights.push_back(0.0);
      }
  }
  return ps;
}

double volume_integral(const TorusSurface& params, double shrink, int n_r, int n_theta, int n_phi,
                       const std::function<double(const Vec3&)>& f) {
  std::vector<double> gx, gw;
  gauss_legendre_01(n_r, gx, gw);
  const double dth = 2 * pi / n_theta, dph = 2 * pi / n_phi;
  double acc = 0;
  for (int ir = 0; ir < n_r; ir++)
    for (int i = 0; i < n_theta; i++)
      for (int j = 0; j < n_phi; j++) {
        double th = dth * i, ph = dph * j;
        double s = shrink * params.radial(th, ph);
        double r = s * gx[ir];
        double w = params.major_radius + r * std::cos(th);
        Vec3 local{w * std::cos(ph), w * std::sin(ph), r * std::sin(th)};
        acc += gw[ir] * s * r * w * dth * dph * f(params.pose.apply_point(local));
      }
  return acc;
}

}  // namespace wk
