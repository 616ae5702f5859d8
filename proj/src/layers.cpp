#include "windingkit/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "windingkit/parallel.hpp"
#include "windingkit/spectral.hpp"

namespace wk {

namespace {

constexpr double kNodeHitSq = 1e-24;

[[noreturn]] void node_hit() {
  throw std::invalid_argument("layer potential: target coincides with a source node");
}

}  // namespace

double single_layer_point(const SurfaceGrid& src, std::span<const double> density, const Vec3& x) {
  double s = 0;
  for (int k = 0; k < src.size(); k++) {
    double r2 = norm_sq(src.nodes[k] - x);
    if (r2 < kNodeHitSq) node_hit();
    s += density[k] * src.area_weights[k] / std::sqrt(r2);
  }
  return s / (4 * pi);
}

Vec3 single_layer_point(const SurfaceGrid& src, std::span<const Vec3> density, const Vec3& x) {
  Vec3 s{};
  for (int k = 0; k < src.size(); k++) {
    double r2 = norm_sq(src.nodes[k] - x);
    if (r2 < kNodeHitSq) node_hit();
    s += (src.area_weights[k] / std::sqrt(r2)) * density[k];
  }
  return s / (4 * pi);
}

double double_layer_point(const SurfaceGrid& src, std::span<const double> g, const Vec3& x) {
  double s = 0;
  for (int k = 0; k < src.size(); k++) {
    Vec3 d = src.nodes[k] - x;
    double r2 = norm_sq(d);
    if (r2 < kNodeHitSq) node_hit();
    s += g[k] * src.area_weights[k] * dot(d, src.normals[k]) / (r2 * std::sqrt(r2));
  }
  return s / (4 * pi);
}

std::vector<double> single_layer(const SurfaceGrid& src, std::span<const double> density,
                                 std::span<const Vec3> targets) {
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t t) { out[t] = single_layer_point(src, density, targets[t]); });
  return out;
}

std::vector<Vec3> single_layer(const SurfaceGrid& src, std::span<const Vec3> density,
                               std::span<const Vec3> targets) {
  std::vector<Vec3> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t t) { out[t] = single_layer_point(src, density, targets[t]); });
  return out;
}

std::vector<double> double_layer_w(const SurfaceGrid& src, std::span<const double> g,
                                   std::span<const Vec3> targets) {
  for (const auto& x : targets)
    if (std::fabs(src.surface.radial_gap(x)) < 1e-9)
      throw std::invalid_argument("double_layer_w: on-surface target; use the interior trace");
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t t) { out[t] = double_layer_point(src, g, targets[t]); });
  return out;
}

BoundaryTraces::BoundaryTraces(std::shared_ptr<const SurfaceGrid> plain,
                               std::shared_ptr<const SurfaceGrid> staggered, TraceOptions opt)
    : plain_(std::move(plain)), staggered_(std::move(staggered)) {
  if (!plain_ || !staggered_ || plain_->staggered || !staggered_->staggered)
    throw std::invalid_argument("BoundaryTraces: need a plain source grid and its staggered companion");
  if (plain_->n_theta != staggered_->n_theta || plain_->n_phi != staggered_->n_phi)
    throw std::invalid_argument("BoundaryTraces: grid sizes must match");
  if (opt.fine_factor < 3 || opt.fine_factor % 2 == 0)
    throw std::invalid_argument("BoundaryTraces: fine_factor must be odd and >= 3");

  const int nt = plain_->n_theta, np = plain_->n_phi, n = plain_->size();
  const int f = opt.fine_factor;

  // naive double-layer row sums (the discrete solid angle at staggered nodes)
  dl_naive1_.assign(n, 0.0);
  parallel_for(n, [&](std::size_t t) {
    const Vec3 x = staggered_->nodes[t];
    double s = 0;
    for (int k = 0; k < n; k++) {
      Vec3 d = plain_->nodes[k] - x;
      double r2 = norm_sq(d);
      s += plain_->area_weights[k] * dot(d, plain_->normals[k]) / (r2 * std::sqrt(r2));
    }
    dl_naive1_[t] = s / (4 * pi);
  });

  // single-layer defect e1 at a coarse staggered subset, then interpolated
  int nc_t = nt, nc_p = np, step_t = 1, step_p = 1;
  if (opt.e1_subsample > 0) {
    while (nc_t / 2 >= opt.e1_subsample && nc_t % 2 == 0) { nc_t /= 2; step_t *= 2; }
    while (nc_p / 2 >= opt.e1_subsample && nc_p % 2 == 0) { nc_p /= 2; step_p *= 2; }
  }
  SurfaceGrid fine = build_surface(plain_->surface, f * nt, f * np, false);

  std::vector<double> e1_coarse(nc_t * nc_p);
  parallel_for(static_cast<std::size_t>(nc_t) * nc_p, [&](std::size_t c) {
    int ic = static_cast<int>(c) / nc_p, jc = static_cast<int>(c) % nc_p;
    const Vec3 x = staggered_->nodes[staggered_->index(ic * step_t, jc * step_p)];
    double coarse_sum = 0, fine_sum = 0;
    for (int k = 0; k < n; k++)
      coarse_sum += plain_->area_weights[k] / norm(plain_->nodes[k] - x);
    for (int k = 0; k < fine.size(); k++)
      fine_sum += fine.area_weights[k] / norm(fine.nodes[k] - x);
    coarse_sum /= 4 * pi;
    fine_sum /= 4 * pi;
    // first-order Richardson completion of the fine value
    double sl1_true = fine_sum + (fine_sum - coarse_sum) / (f - 1.0);
    e1_coarse[c] = coarse_sum - sl1_true;
  });

  if (step_t == 1 && step_p == 1) {
    e1_ = std::move(e1_coarse);
  } else {
    // e1 samples sit on a uniform coarse sub-lattice of the staggered grid;
    // lift them spectrally to every staggered node
    e1_.assign(n, 0.0);
    double ht = 2 * pi / nt, hp = 2 * pi / np;
    parallel_for(n, [&](std::size_t t) {
      int i = static_cast<int>(t) / np, j = static_cast<int>(t) % np;
      double th = (i + 0.5) * ht, ph = (j + 0.5) * hp;
      double s = 0;
      for (int ic = 0; ic < nc_t; ic++) {
        double wt = dirichlet_kernel(nc_t, th - (ic * step_t + 0.5) * ht);
        if (wt == 0.0) continue;
        double row = 0;
        for (int jc = 0; jc < nc_p; jc++)
          row += dirichlet_kernel(nc_p, ph - (jc * step_p + 0.5) * hp) * e1_coarse[ic * nc_p + jc];
        s += wt * row;
      }
      e1_[t] = s;
    });
  }
}

std::vector<double> BoundaryTraces::single_layer_trace(std::span<const double> density_plain) const {
  const int n = plain_->size();
  auto dens_stag = shift_plain_to_staggered(plain_->n_theta, plain_->n_phi, density_plain);
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t t) {
    const Vec3 x = staggered_->nodes[t];
    double s = 0;
    for (int k = 0; k < n; k++)
      s += density_plain[k] * plain_->area_weights[k] / norm(plain_->nodes[k] - x);
    out[t] = s / (4 * pi) - dens_stag[t] * e1_[t];
  });
  return out;
}

std::vector<Vec3> BoundaryTraces::single_layer_trace(std::span<const Vec3> density_plain) const {
  const int nt = plain_->n_theta, np = plain_->n_phi, n = plain_->size();
  // interpolate each Cartesian component to the staggered nodes
  std::vector<double> cx(n), cy(n), cz(n);
  for (int k = 0; k < n; k++) { cx[k] = density_plain[k].x; cy[k] = density_plain[k].y; cz[k] = density_plain[k].z; }
  auto sx = shift_plain_to_staggered(nt, np, cx);
  auto sy = shift_plain_to_staggered(nt, np, cy);
  auto sz = shift_plain_to_staggered(nt, np, cz);

  std::vector<Vec3> out(n);
  parallel_for(n, [&](std::size_t t) {
    const Vec3 x = staggered_->nodes[t];
    Vec3 s{};
    for (int k = 0; k < n; k++)
      s += (plain_->area_weights[k] / norm(plain_->nodes[k] - x)) * density_plain[k];
    out[t] = s / (4 * pi) - e1_[t] * Vec3{sx[t], sy[t], sz[t]};
  });
  return out;
}

std::vector<double> BoundaryTraces::double_layer_interior_trace(std::span<const double> g_plain) const {
  const int nt = plain_->n_theta, np = plain_->n_phi, n = plain_->size();
  auto g_stag = shift_plain_to_staggered(nt, np, g_plain);
  auto ny = nyquist_transfer(g_plain);
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t t) {
    const Vec3 x = staggered_->nodes[t];
    double s = 0;
    for (int k = 0; k < n; k++) {
      Vec3 d = plain_->nodes[k] - x;
      double r2 = norm_sq(d);
      s += g_plain[k] * plain_->area_weights[k] * dot(d, plain_->normals[k]) / (r2 * std::sqrt(r2));
    }
    s /= 4 * pi;
    // K[g] + g/2 with the solid-angle defect folded onto the local density
    out[t] = s + g_stag[t] * (1.0 - dl_naive1_[t]) + ny[t];
  });
  return out;
}

// The half-cell collocation cannot see the Nyquist Fourier lines: the shift
// interpolation annihilates them and the quadrature response of the smooth
// kernel to the alternating patterns is below roundoff. They carry no
// physical content for resolved densities; an identity coupling pins them so
// the square collocation system stays nonsingular.
std::vector<double> BoundaryTraces::nyquist_transfer(std::span<const double> g_plain) const {
  const int nt = plain_->n_theta, np = plain_->n_phi;
  std::vector<double> line_t(np, 0.0), line_p(nt, 0.0);
  double corner = 0;
  for (int i = 0; i < nt; i++)
    for (int j = 0; j < np; j++) {
      double v = g_plain[i * np + j];
      double st = (i % 2) ? -1.0 : 1.0, sp = (j % 2) ? -1.0 : 1.0;
      line_t[j] += st * v;
      line_p[i] += sp * v;
      corner += st * sp * v;
    }
  for (double& v : line_t) v /= nt;
  for (double& v : line_p) v /= np;
  corner /= nt * np;

  // move the non-Nyquist factor to the staggered nodes spectrally
  Circulant sh_t = Circulant::shift(nt, 0.5), sh_p = Circulant::shift(np, 0.5);
  std::vector<double> lt_s(np, 0.0), lp_s(nt, 0.0);
  for (int jt = 0; jt < np; jt++)
    for (int j = 0; j < np; j++) lt_s[jt] += sh_p.w[(jt - j + np) % np] * line_t[j];
  for (int it = 0; it < nt; it++)
    for (int i = 0; i < nt; i++) lp_s[it] += sh_t.w[(it - i + nt) % nt] * line_p[i];

  std::vector<double> out(nt * np);
  for (int it = 0; it < nt; it++)
    for (int jt = 0; jt < np; jt++) {
      double st = (it % 2) ? -1.0 : 1.0, sp = (jt % 2) ? -1.0 : 1.0;
      out[it * np + jt] = st * lt_s[jt] + sp * lp_s[it] + st * sp * corner;
    }
  return out;
}

Matrix BoundaryTraces::dense_interior_trace() const {
  const int nt = plain_->n_theta, np = plain_->n_phi, n = plain_->size();
  Matrix m(n, n);
  Circulant sh_t = Circulant::shift(nt, 0.5), sh_p = Circulant::shift(np, 0.5);
  parallel_for(n, [&](std::size_t t) {
    const Vec3 x = staggered_->nodes[t];
    double* row = m.row(t);
    for (int k = 0; k < n; k++) {
      Vec3 d = plain_->nodes[k] - x;
      double r2 = norm_sq(d);
      row[k] = plain_->area_weights[k] * dot(d, plain_->normals[k]) / (r2 * std::sqrt(r2) * 4 * pi);
    }
    // + (1 - K_naive[1]) * interpolation row
    int it = static_cast<int>(t) / np, jt = static_cast<int>(t) % np;
    double c = 1.0 - dl_naive1_[t];
    double st = (it % 2) ? -1.0 : 1.0, sp = (jt % 2) ? -1.0 : 1.0;
    for (int i = 0; i < nt; i++) {
      double wt = sh_t.w[(it - i + nt) % nt];
      double si = (i % 2) ? -1.0 : 1.0;
      for (int j = 0; j < np; j++) {
        double sj = (j % 2) ? -1.0 : 1.0;
        // Nyquist identity coupling (see nyquist_transfer)
        row[i * np + j] += c * wt * sh_p.w[(jt - j + np) % np] +
                           st * si * sh_p.w[(jt - j + np) % np] / nt +
                           sp * sj * sh_t.w[(it - i + nt) % nt] / np +
                           st * sp * si * sj / (nt * np);
      }
    }
  });
  return m;
}

LayerOperator assemble_layer_operator(LayerOperator::Kind kind,
                                      std::shared_ptr<const SurfaceGrid> source,
                                      std::vector<Vec3> targets) {
  LayerOperator op;
  op.kind = kind;
  op.source = std::move(source);
  op.targets = std::move(targets);
  const SurfaceGrid& s = *op.source;
  op.matrix = Matrix(op.targets.size(), s.size());
  parallel_for(op.targets.size(), [&](std::size_t t) {
    double* row = op.matrix.row(t);
    for (int k = 0; k < s.size(); k++) {
      Vec3 d = s.nodes[k] - op.targets[t];
      double r2 = norm_sq(d), r = std::sqrt(r2);
      if (r2 < kNodeHitSq) node_hit();
      if (kind == LayerOperator::Kind::single)
        row[k] = s.area_weights[k] / (4 * pi * r);
      else
        row[k] = s.area_weights[k] * dot(d, s.normals[k]) / (4 * pi * r2 * r);
    }
  });
  return op;
}

}  // namespace wk
