#include "windingkit/biot_savart.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "windingkit/parallel.hpp"
#include "windingkit/spectral.hpp"

namespace wk {

namespace {

Vec3 bs_sum(const SurfaceGrid& grid, std::span<const Vec3> j, const Vec3& x) {
  Vec3 b{};
  for (int k = 0; k < grid.size(); k++) {
    Vec3 d = x - grid.nodes[k];
    double r2 = norm_sq(d);
    double r = std::sqrt(r2);
    b += (grid.area_weights[k] / (r2 * r)) * cross(j[k], d);
  }
  return b / (4 * pi);
}

double distance_to_nodes(const SurfaceGrid& grid, const Vec3& x) {
  double d2 = 1e300;
  for (const auto& y : grid.nodes) d2 = std::min(d2, norm_sq(y - x));
  return std::sqrt(d2);
}

// factor needed so that dist >= guard * spacing / factor
int required_factor(double dist, double spacing, const BsGuard& guard) {
  int f = 1;
  while (dist < guard.guard_factor * spacing / f && f < guard.max_upsample) f *= 2;
  return f;
}

std::vector<Vec3> upsample_field(const SurfaceGrid& coarse, std::span<const Vec3> j,
                                 const SurfaceGrid& fine) {
  const int nt = coarse.n_theta, np = coarse.n_phi;
  std::vector<double> wt(fine.n_theta * nt), wp(fine.n_phi * np);
  for (int bigi = 0; bigi < fine.n_theta; bigi++)
    for (int i = 0; i < nt; i++)
      wt[bigi * nt + i] = dirichlet_kernel(nt, 2 * pi * (double(bigi) / fine.n_theta - double(i) / nt));
  for (int bigj = 0; bigj < fine.n_phi; bigj++)
    for (int j2 = 0; j2 < np; j2++)
      wp[bigj * np + j2] = dirichlet_kernel(np, 2 * pi * (double(bigj) / fine.n_phi - double(j2) / np));

  // theta pass then phi pass, per component
  std::vector<Vec3> mid(fine.n_theta * np), out(fine.size());
  parallel_for(fine.n_theta, [&](std::size_t bigi) {
    for (int j2 = 0; j2 < np; j2++) {
      Vec3 s{};
      for (int i = 0; i < nt; i++) {
        double w = wt[bigi * nt + i];
        if (w != 0.0) s += w * j[i * np + j2];
      }
      mid[bigi * np + j2] = s;
    }
  });
  parallel_for(fine.n_theta, [&](std::size_t bigi) {
    for (int bigj = 0; bigj < fine.n_phi; bigj++) {
      Vec3 s{};
      for (int j2 = 0; j2 < np; j2++) {
        double w = wp[bigj * np + j2];
        if (w != 0.0) s += w * mid[bigi * np + j2];
      }
      out[bigi * fine.n_phi + bigj] = s;
    }
  });
  return out;
}

struct LevelSet {
  std::vector<int> factors;               // per point
  std::map<int, SurfaceGrid> grids;       // factor -> refined grid (factor > 1)
  bool any_violation = false;
};

LevelSet plan_levels(const SurfaceGrid& grid, std::span<const Vec3> points, const BsGuard& guard) {
  LevelSet ls;
  ls.factors.resize(points.size());
  double spacing = grid.max_spacing();
  std::vector<double> dist(points.size());
  parallel_for(points.size(), [&](std::size_t p) { dist[p] = distance_to_nodes(grid, points[p]); });
  for (std::size_t p = 0; p < points.size(); p++) {
    int f = required_factor(dist[p], spacing, guard);
    ls.factors[p] = f;
    if (dist[p] < guard.guard_factor * spacing) ls.any_violation = true;
    if (f > 1 && !ls.grids.count(f))
      ls.grids.emplace(f, build_surface(grid.surface, f * grid.n_theta, f * grid.n_phi, grid.staggered));
  }
  return ls;
}

}  // namespace

std::vector<BsSample> bs_eval_many(const SurfaceGrid& grid, std::span<const Vec3> j,
                                   std::span<const Vec3> points, const BsGuard& guard) {
  if (static_cast<int>(j.size()) != grid.size())
    throw std::invalid_argument("bs_eval: current sample count does not match the grid");
  LevelSet ls = plan_levels(grid, points, guard);
  std::map<int, std::vector<Vec3>> fine_j;
  for (auto& [f, fg] : ls.grids) fine_j[f] = upsample_field(grid, j, fg);

  double spacing = grid.max_spacing();
  std::vector<BsSample> out(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    int f = ls.factors[p];
    const SurfaceGrid& src = f == 1 ? grid : ls.grids.at(f);
    std::span<const Vec3> cur = f == 1 ? j : std::span<const Vec3>(fine_j.at(f));
    out[p].b = bs_sum(src, cur, points[p]);
    out[p].upsample_used = f;
    out[p].guard_violated = distance_to_nodes(grid, points[p]) < guard.guard_factor * spacing;
  });
  return out;
}

BsSample bs_eval(const SurfaceGrid& grid, std::span<const Vec3> j, const Vec3& x,
                 const BsGuard& guard) {
  return bs_eval_many(grid, j, std::span<const Vec3>(&x, 1), guard)[0];
}

std::vector<BsSample> bs_eval_many(const CurrentBasis& basis, std::span<const double> coeffs,
                                   std::span<const Vec3> points, const BsGuard& guard) {
  const SurfaceGrid& grid = basis.grid();
  LevelSet ls = plan_levels(grid, points, guard);
  std::map<int, std::vector<Vec3>> fine_j;
  {
    std::vector<Vec3> base(grid.size());
    basis.synthesize(coeffs, grid, base);
    fine_j[1] = std::move(base);
  }
  for (auto& [f, fg] : ls.grids) {
    std::vector<Vec3> jf(fg.size());
    basis.synthesize(coeffs, fg, jf);
    fine_j[f] = std::move(jf);
  }

  double spacing = grid.max_spacing();
  std::vector<BsSample> out(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    int f = ls.factors[p];
    const SurfaceGrid& src = f == 1 ? grid : ls.grids.at(f);
    out[p].b = bs_sum(src, fine_j.at(f), points[p]);
    out[p].upsample_used = f;
    out[p].guard_violated = distance_to_nodes(grid, points[p]) < guard.guard_factor * spacing;
  });
  return out;
}

std::vector<Vec3> ForwardMap::field(std::span<const double> coeffs) const {
  auto flat = a.multiply(coeffs);
  std::vector<Vec3> out(flat.size() / 3);
  for (std::size_t p = 0; p < out.size(); p++)
    out[p] = {flat[3 * p], flat[3 * p + 1], flat[3 * p + 2]};
  return out;
}

ForwardMap assemble_forward(const CurrentBasis& basis, ProbeSet probes, const BsGuard& guard) {
  const SurfaceGrid& grid = basis.grid();
  const int nb = basis.size();
  const int npts = probes.total();

  ForwardMap fm;
  fm.probes = std::move(probes);
  fm.n_basis = nb;
  fm.a = Matrix(3 * npts, nb);

  LevelSet ls = plan_levels(grid, fm.probes.points, guard);
  fm.guard_flagged = ls.any_violation;

  // group points by refinement level, then stream basis blocks
  std::map<int, std::vector<int>> by_factor;
  for (int p = 0; p < npts; p++) by_factor[ls.factors[p]].push_back(p);

  constexpr int kBlock = 48;
  std::vector<std::vector<Vec3>> block(kBlock);
  for (auto& [f, pts] : by_factor) {
    const SurfaceGrid& src = f == 1 ? grid : ls.grids.at(f);
    for (int k0 = 0; k0 < nb; k0 += kBlock) {
      const int kn = std::min(kBlock, nb - k0);
      for (int k = 0; k < kn; k++) {
        block[k].assign(src.size(), Vec3{});
        basis.basis_current(k0 + k, src, block[k]);
        for (int i = 0; i < src.size(); i++) block[k][i] *= src.area_weights[i] / (4 * pi);
      }
      parallel_for(pts.size(), [&](std::size_t pi) {
        const int p = pts[pi];
        const Vec3 x = fm.probes.points[p];
        std::vector<Vec3> acc(kn, Vec3{});
        for (int i = 0; i < src.size(); i++) {
          Vec3 d = x - src.nodes[i];
          double r2 = norm_sq(d);
          Vec3 kern = d / (r2 * std::sqrt(r2));
          for (int k = 0; k < kn; k++) acc[k] += cross(block[k][i], kern);
        }
        for (int k = 0; k < kn; k++) {
          fm.a(3 * p + 0, k0 + k) = acc[k].x;
          fm.a(3 * p + 1, k0 + k) = acc[k].y;
          fm.a(3 * p + 2, k0 + k) = acc[k].z;
        }
      });
    }
  }
  return fm;
}

std::vector<Vec3> bs_volume_gamma(const HarmonicNeumannField& gamma, const SurfaceGrid& cws,
                                  std::span<const Vec3> targets) {
  std::vector<Vec3> density(cws.size());
  for (int k = 0; k < cws.size(); k++)
    density[k] = -cross(cws.normals[k], gamma(cws.nodes[k]));
  return single_layer(cws, density, targets);
}

std::vector<Vec3> bs_volume_gamma_trace(const HarmonicNeumannField& gamma,
                                        const BoundaryTraces& traces) {
  const SurfaceGrid& cws = traces.plain();
  std::vector<Vec3> density(cws.size());
  for (int k = 0; k < cws.size(); k++)
    density[k] = -cross(cws.normals[k], gamma(cws.nodes[k]));
  return traces.single_layer_trace(density);
}

FieldMetrics field_metrics(std::span<const Vec3> field, std::span<const Vec3> target,
                           const ProbeSet& probes) {
  if (field.size() != target.size() || static_cast<int>(field.size()) != probes.total())
    throw std::invalid_argument("field_metrics: sample counts do not match the probe set");
  FieldMetrics m;
  for (int p = 0; p < probes.n_base; p++) {
    Vec3 e = field[p] - target[p];
    m.residual_l2_sq += probes.weights[p] * norm_sq(e);
    m.c0_error = std::max(m.c0_error, norm(e));
  }
  m.c1_error = m.c0_error;
  if (probes.fd_delta > 0) {
    double worst = 0;
    for (int p = 0; p < probes.n_base; p++) {
      int s0 = probes.n_base + 6 * p;
      double fro = 0;
      for (int d = 0; d < 3; d++) {
        Vec3 ep = field[s0 + 2 * d] - target[s0 + 2 * d];
        Vec3 em = field[s0 + 2 * d + 1] - target[s0 + 2 * d + 1];
        Vec3 col = (ep - em) / (2 * probes.fd_delta);
        fro += norm_sq(col);
      }
      worst = std::max(worst, std::sqrt(fro));
    }
    m.c1_error += worst;
  }
  return m;
}

}  // namespace wk
