#include "windingkit/currents.hpp"

#include <cmath>
#include <stdexcept>

#include "windingkit/parallel.hpp"

namespace wk {

namespace {

// j = N x grad_S(Phi) from the analytic parameter derivatives of Phi.
inline Vec3 rotated_gradient(const SurfaceGrid& g, int k, double dphi_dtheta, double dphi_dphi) {
  double e = g.metric_e[k], f = g.metric_f[k], gg = g.metric_g[k];
  double det = e * gg - f * f;
  Vec3 grad = ((gg * dphi_dtheta - f * dphi_dphi) * g.tangent_theta[k] +
               (e * dphi_dphi - f * dphi_dtheta) * g.tangent_phi[k]) /
              det;
  return cross(g.normals[k], grad);
}

}  // namespace

CurrentBasis::CurrentBasis(std::shared_ptr<const SurfaceGrid> grid, int m_max, int n_max,
                           bool secular_poloidal, bool secular_toroidal)
    : grid_(std::move(grid)),
      secular_poloidal_(secular_poloidal),
      secular_toroidal_(secular_toroidal) {
  if (!grid_ || grid_->staggered)
    throw std::invalid_argument("CurrentBasis: needs a plain source grid");
  n_secular_ = (secular_poloidal_ ? 1 : 0) + (secular_toroidal_ ? 1 : 0);
  // canonical half of the (m, n) lattice, excluding (0, 0)
  for (int m = 0; m <= m_max; m++)
    for (int n = -n_max; n <= n_max; n++) {
      if (m == 0 && n <= 0) continue;
      modes_.push_back({m, n, false});
      modes_.push_back({m, n, true});
    }
}

void CurrentBasis::basis_current(int index, const SurfaceGrid& at, std::span<Vec3> out) const {
  if (index < 0 || index >= size()) throw std::out_of_range("CurrentBasis: index out of range");
  if (static_cast<int>(out.size()) != at.size())
    throw std::invalid_argument("CurrentBasis: output size mismatch");

  int k = index;
  if (secular_poloidal_ && k-- == 0) {
    // Phi = -phi / 2pi: unit net poloidal loop current, field e_phi/(2 pi rho) inside
    for (int i = 0; i < at.size(); i++) out[i] = rotated_gradient(at, i, 0.0, -1.0 / (2 * pi));
    return;
  }
  if (secular_toroidal_ && k-- == 0) {
    // Phi = -theta / 2pi: unit net toroidal loop current
    for (int i = 0; i < at.size(); i++) out[i] = rotated_gradient(at, i, -1.0 / (2 * pi), 0.0);
    return;
  }
  const FourierMode& md = modes_[k];
  for (int i = 0; i < at.n_theta; i++) {
    double th = at.theta(i);
    for (int j = 0; j < at.n_phi; j++) {
      double arg = md.m * th - md.n * at.phi(j);
      double dth, dph;
      if (md.sine) {
        double c = std::cos(arg);
        dth = md.m * c;
        dph = -md.n * c;
      } else {
        double s = std::sin(arg);
        dth = -md.m * s;
        dph = md.n * s;
      }
      out[at.index(i, j)] = rotated_gradient(at, at.index(i, j), dth, dph);
    }
  }
}

std::vector<Vec3> CurrentBasis::basis_current(int index) const {
  std::vector<Vec3> out(grid_->size());
  basis_current(index, *grid_, out);
  return out;
}

std::vector<Vec3> CurrentBasis::synthesize(std::span<const double> coeffs) const {
  std::vector<Vec3> out(grid_->size());
  synthesize(coeffs, *grid_, out);
  return out;
}

void CurrentBasis::synthesize(std::span<const double> coeffs, const SurfaceGrid& at,
                              std::span<Vec3> out) const {
  if (static_cast<int>(coeffs.size()) != size())
    throw std::invalid_argument("CurrentBasis: coefficient count mismatch");
  for (auto& v : out) v = {0, 0, 0};
  std::vector<Vec3> scratch(at.size());
  for (int k = 0; k < size(); k++) {
    if (coeffs[k] == 0.0) continue;
    basis_current(k, at, scratch);
    for (int i = 0; i < at.size(); i++) out[i] += coeffs[k] * scratch[i];
  }
}

Matrix CurrentBasis::mass_matrix() const {
  const int nb = size(), n = grid_->size();
  std::vector<std::vector<Vec3>> fields(nb);
  for (int k = 0; k < nb; k++) fields[k] = basis_current(k);
  Matrix m(nb, nb);
  parallel_for(nb, [&](std::size_t a) {
    for (int b = static_cast<int>(a); b < nb; b++) {
      double s = 0;
      for (int i = 0; i < n; i++) s += dot(fields[a][i], fields[b][i]) * grid_->area_weights[i];
      m(a, b) = s;
      m(b, a) = s;
    }
  });
  return m;
}

double net_poloidal_current(const SurfaceGrid& grid, std::span<const Vec3> j, int i_theta) {
  double s = 0;
  for (int jj = 0; jj < grid.n_phi; jj++) {
    int k = grid.index(i_theta, jj);
    s += dot(j[k], cross(grid.tangent_phi[k], grid.normals[k]));
  }
  return s * 2 * pi / grid.n_phi;
}

double net_toroidal_current(const SurfaceGrid& grid, std::span<const Vec3> j, int j_phi) {
  double s = 0;
  for (int i = 0; i < grid.n_theta; i++) {
    int k = grid.index(i, j_phi);
    s += dot(j[k], cross(grid.tangent_theta[k], grid.normals[k]));
  }
  return s * 2 * pi / grid.n_theta;
}

double weak_divergence_defect(const SurfaceGrid& grid, std::span<const Vec3> j, int mode_cutoff) {
  double jn2 = 0;
  for (int k = 0; k < grid.size(); k++) jn2 += norm_sq(j[k]) * grid.area_weights[k];
  double jn = std::sqrt(jn2);
  if (jn == 0) return 0;

  double worst = 0;
  std::vector<double> phi(grid.size());
  for (int m = 0; m <= mode_cutoff; m++)
    for (int n = -mode_cutoff; n <= mode_cutoff; n++) {
      if (m == 0 && n <= 0) continue;
      for (int parity = 0; parity < 2; parity++) {
        for (int i = 0; i < grid.n_theta; i++)
          for (int jj = 0; jj < grid.n_phi; jj++) {
            double arg = m * grid.theta(i) - n * grid.phi(jj);
            phi[grid.index(i, jj)] = parity ? std::sin(arg) : std::cos(arg);
          }
        auto grad = surface_gradient(grid, phi);
        double pairing = 0, gn2 = 0;
        for (int k = 0; k < grid.size(); k++) {
          pairing += dot(j[k], grad[k]) * grid.area_weights[k];
          gn2 += norm_sq(grad[k]) * grid.area_weights[k];
        }
        worst = std::max(worst, std::fabs(pairing) / (jn * std::sqrt(gn2)));
      }
    }
  return worst;
}

}  // namespace wk
