#include "windingkit/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "windingkit/parallel.hpp"
#include "windingkit/spectral.hpp"

namespace wk {

namespace {

// matrix-free application of the corrected trace operator T = K + I/2
std::vector<double> apply_trace(const BoundaryTraces& traces, std::span<const double> g_plain) {
  return traces.double_layer_interior_trace(g_plain);
}

}  // namespace

HarmonicSourceData compute_F(const HarmonicNeumannField& gamma, const BoundaryTraces& traces) {
  const SurfaceGrid& plain = traces.plain();
  const SurfaceGrid& stag = traces.staggered();
  const int nt = plain.n_theta, np = plain.n_phi;

  HarmonicSourceData out;
  out.bs_gamma_staggered = bs_volume_gamma_trace(gamma, traces);

  std::vector<double> q_stag(stag.size());
  for (int k = 0; k < stag.size(); k++)
    q_stag[k] = dot(out.bs_gamma_staggered[k], stag.normals[k]);

  out.flux_defect = 0;
  for (int k = 0; k < stag.size(); k++) out.flux_defect += q_stag[k] * stag.area_weights[k];

  out.q_plain = ScalarGridFunction(traces.plain_ptr());
  out.q_plain.values = shift_staggered_to_plain(nt, np, q_stag);
  out.f = ScalarGridFunction(traces.staggered_ptr());
  out.f.values = traces.single_layer_trace(out.q_plain.values);
  return out;
}

double eval_F_offsurface(const HarmonicSourceData& data, const BoundaryTraces& traces,
                         const Vec3& x) {
  return single_layer_point(traces.plain(), std::span<const double>(data.q_plain.values), x);
}

DirectSolveResult solve_g_direct(const BoundaryTraces& traces, std::span<const double> f_staggered,
                                 int dense_limit) {
  const SurfaceGrid& plain = traces.plain();
  const int n = plain.size();
  if (static_cast<int>(f_staggered.size()) != n)
    throw std::invalid_argument("solve_g_direct: F must live on the staggered grid");

  DirectSolveResult out;
  double fn = norm2(f_staggered);
  if (n <= dense_limit) {
    Matrix t = traces.dense_interior_trace();
    Lu lu(t);
    out.g = lu.solve(f_staggered);
    double hi2 = spd_norm_estimate(
        [&](std::span<const double> x) {
          auto y = t.multiply(x);
          return t.multiply_transposed(y);
        },
        n, 25);
    double lo2 = spd_norm_estimate(
        [&](std::span<const double> x) {
          auto y = lu.solve(x);
          return lu.solve_transposed(y);
        },
        n, 25);
    out.condition_estimate = std::sqrt(hi2 * lo2);
  } else {
    std::vector<double> g;
    double res = gmres([&](std::span<const double> x) { return apply_trace(traces, x); },
                       f_staggered, g, 1e-12, 300);
    (void)res;
    out.g = std::move(g);
  }
  auto r = apply_trace(traces, out.g);
  double rn = 0;
  for (int k = 0; k < n; k++) rn += (r[k] - f_staggered[k]) * (r[k] - f_staggered[k]);
  out.residual = fn > 0 ? std::sqrt(rn) / fn : 0.0;
  return out;
}

FixedPointResult solve_g_fixed_point(const BoundaryTraces& traces,
                                     std::span<const double> f_staggered,
                                     const FixedPointOptions& opt) {
  const SurfaceGrid& plain = traces.plain();
  const int n = plain.size();
  if (!(opt.relaxation > 0) || !(opt.relaxation < 2))
    throw std::invalid_argument("solve_g_fixed_point: relaxation must lie in (0, 2)");

  FixedPointResult out;
  out.g.assign(n, 0.0);
  out.residual_history.reserve(opt.max_iter);

  auto l2 = [&](std::span<const double> v) {
    double s = 0;
    for (int k = 0; k < n; k++) s += v[k] * v[k] * plain.area_weights[k];
    return std::sqrt(s);
  };

  for (int it = 0; it < opt.max_iter; it++) {
    auto tg = apply_trace(traces, out.g);
    std::vector<double> resid(n);
    for (int k = 0; k < n; k++) resid[k] = f_staggered[k] - tg[k];
    auto step = shift_staggered_to_plain(plain.n_theta, plain.n_phi, resid);
    for (int k = 0; k < n; k++) {
      step[k] *= opt.relaxation;
      out.g[k] += step[k];
    }
    double sn = l2(step);
    out.residual_history.push_back(sn);
    out.iterations_used = it + 1;
    double gn = l2(out.g);
    if (sn <= opt.tol * (gn > 0 ? gn : 1.0)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

KernelSolution assemble_j0(const HarmonicNeumannField& gamma, const BoundaryTraces& traces,
                           std::span<const double> g_plain) {
  const SurfaceGrid& plain = traces.plain();
  const int nt = plain.n_theta, np = plain.n_phi, n = plain.size();
  if (static_cast<int>(g_plain.size()) != n)
    throw std::invalid_argument("assemble_j0: g must live on the plain grid");

  KernelSolution sol;
  sol.g.assign(g_plain.begin(), g_plain.end());

  // The half-cell shifts carry no Nyquist information, so those lines of g
  // are pure gauge; drop them before differentiating.
  std::vector<double> g_use(g_plain.begin(), g_plain.end());
  zero_nyquist_lines(nt, np, g_use);

  // BS_Omega(Gamma) trace moved from the staggered collocation to the nodes
  auto bs_stag = bs_volume_gamma_trace(gamma, traces);
  std::vector<double> cx(n), cy(n), cz(n);
  for (int k = 0; k < n; k++) { cx[k] = bs_stag[k].x; cy[k] = bs_stag[k].y; cz[k] = bs_stag[k].z; }
  auto px = shift_staggered_to_plain(nt, np, cx);
  auto py = shift_staggered_to_plain(nt, np, cy);
  auto pz = shift_staggered_to_plain(nt, np, cz);

  auto grad = surface_gradient(plain, g_use);

  sol.j0.resize(n);
  sol.j1.resize(n);
  double pairing = 0, grad_pairing = 0;
  for (int k = 0; k < n; k++) {
    Vec3 bs{px[k], py[k], pz[k]};
    sol.j1[k] = cross(bs, plain.normals[k]);
    Vec3 rotated_grad = cross(plain.normals[k], grad[k]);
    sol.j0[k] = sol.j1[k] - rotated_grad;
    Vec3 gam = gamma(plain.nodes[k]);
    pairing += dot(sol.j0[k], gam) * plain.area_weights[k];
    grad_pairing += dot(rotated_grad, gam) * plain.area_weights[k];
  }
  sol.pairing_value = pairing;
  sol.gradient_pairing = grad_pairing;
  return sol;
}

double verify_kernel(const SurfaceGrid& grid, const KernelSolution& sol,
                     std::span<const Vec3> probes, const BsGuard& guard) {
  auto b0 = bs_eval_many(grid, sol.j0, probes, guard);
  auto b1 = bs_eval_many(grid, sol.j1, probes, guard);
  double m0 = 0, m1 = 0;
  for (std::size_t p = 0; p < probes.size(); p++) {
    m0 = std::max(m0, norm(b0[p].b));
    m1 = std::max(m1, norm(b1[p].b));
  }
  return m1 > 0 ? m0 / m1 : 0.0;
}

NullspaceResult nullspace_svd(const ForwardMap& forward, const Matrix& mass) {
  const Matrix& a = forward.a;
  const std::size_t nb = a.cols();

  Cholesky chol(mass);
  const Matrix& l = chol.factor();

  // B = W^(1/2) A L^(-T): row r of B solves L x = sqrt(w_r) a_r ... applied
  // from the right this is x^T with L^T, i.e. back-substitution per row.
  Matrix b(a.rows(), nb);
  parallel_for(a.rows(), [&](std::size_t r) {
    double w = forward.probes.weights[r / 3];
    if (w == 0.0) return;
    double sw = std::sqrt(w);
    // y = a_r, solve y := y L^{-T}  <=>  L y'^T = a_r^T row-wise forward pass
    std::vector<double> y(nb);
    for (std::size_t i = 0; i < nb; i++) {
      double s = sw * a(r, i);
      for (std::size_t j = 0; j < i; j++) s -= l(i, j) * y[j];
      y[i] = s / l(i, i);
    }
    for (std::size_t i = 0; i < nb; i++) b(r, i) = y[i];
  });

  SvdResult svd = jacobi_svd(std::move(b));

  NullspaceResult out;
  out.spectrum = svd.singular_values;
  const std::size_t last = nb - 1;
  out.gap_ratio = out.spectrum[last] > 0 ? out.spectrum[last - 1] / out.spectrum[last] : 0.0;

  std::vector<double> v_min(nb);
  for (std::size_t i = 0; i < nb; i++) v_min[i] = svd.v(i, last);
  out.kernel_coeffs = chol.solve_lt(v_min);
  return out;
}

std::vector<double> project_onto_basis(const CurrentBasis& basis, std::span<const Vec3> field) {
  const SurfaceGrid& grid = basis.grid();
  if (static_cast<int>(field.size()) != grid.size())
    throw std::invalid_argument("project_onto_basis: sample count mismatch");
  const int nb = basis.size();
  std::vector<double> rhs(nb, 0.0);
  std::vector<Vec3> scratch(grid.size());
  for (int k = 0; k < nb; k++) {
    basis.basis_current(k, grid, scratch);
    double s = 0;
    for (int i = 0; i < grid.size(); i++)
      s += dot(scratch[i], field[i]) * grid.area_weights[i];
    rhs[k] = s;
  }
  Cholesky chol(basis.mass_matrix());
  return chol.solve(rhs);
}

double mass_cosine(const Matrix& mass, std::span<const double> a, std::span<const double> b) {
  auto ma = mass.multiply(a);
  auto mb = mass.multiply(b);
  double ab = dot(a, mb), aa = dot(a, ma), bb = dot(b, mb);
  return std::fabs(ab) / std::sqrt(aa * bb);
}

}  // namespace wk
