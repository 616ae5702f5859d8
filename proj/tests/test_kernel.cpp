#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "windingkit/kernel.hpp"
#include "windingkit/spectral.hpp"

using namespace wk;

namespace {

TorusSurface standard_torus() {
  TorusSurface t;
  t.major_radius = 3;
  t.minor_radius = 1;
  return t;
}

struct Setup {
  std::shared_ptr<const SurfaceGrid> plain, stag;
  std::unique_ptr<BoundaryTraces> traces;
  HarmonicNeumannField gamma;
};

Setup make_setup(int n) {
  Setup s;
  TorusSurface t = standard_torus();
  s.plain = std::make_shared<SurfaceGrid>(build_surface(t, n, n, false));
  s.stag = std::make_shared<SurfaceGrid>(build_surface(t, n, n, true));
  s.traces = std::make_unique<BoundaryTraces>(s.plain, s.stag);
  s.gamma = normalize_gamma(t);
  return s;
}

}  // namespace

TEST_CASE("compute_F basics") {
  Setup s = make_setup(24);

  SUBCASE("zero gamma gives zero data") {
    HarmonicNeumannField z = s.gamma;
    z.strength = 0;
    HarmonicSourceData d = compute_F(z, *s.traces);
    for (double v : d.f_staggered()) CHECK(v == 0.0);
    CHECK(d.flux_defect == 0.0);
  }

  SUBCASE("F is harmonic inside (discrete single-layer structure)") {
    HarmonicSourceData d = compute_F(s.gamma, *s.traces);
    const double h = 1e-2;
    for (const Vec3& x : {Vec3{3, 0, 0}, Vec3{2.8, 0.4, 0.15}}) {
      double c = eval_F_offsurface(d, *s.traces, x);
      double lap = -6 * c;
      for (int axis = 0; axis < 3; axis++) {
        Vec3 dx{axis == 0 ? h : 0.0, axis == 1 ? h : 0.0, axis == 2 ? h : 0.0};
        lap += eval_F_offsurface(d, *s.traces, x + dx) + eval_F_offsurface(d, *s.traces, x - dx);
      }
      lap /= h * h;
      CHECK(std::fabs(lap) < 1e-3 * std::fabs(c) / (h * h) * h * h + 1e-6);
    }
  }

  SUBCASE("the normal flux of BS_Omega(Gamma) cancels") {
    // on the symmetric grid the flux integrand is odd under the up-down
    // reflection, so even the quadrature error cancels pairwise
    HarmonicSourceData d = compute_F(s.gamma, *s.traces);
    CHECK(std::fabs(d.flux_defect) < 1e-8);
  }

  SUBCASE("the flux defect stays small on a perturbed surface") {
    TorusSurface t = standard_torus();
    t.perturbation = {{2, 1, 0.08}};
    auto plain = std::make_shared<SurfaceGrid>(build_surface(t, 24, 24, false));
    auto stag = std::make_shared<SurfaceGrid>(build_surface(t, 24, 24, true));
    BoundaryTraces traces(plain, stag);
    HarmonicNeumannField gamma = normalize_gamma(t);
    HarmonicSourceData d = compute_F(gamma, traces);
    double qscale = 0;
    for (int k = 0; k < stag->size(); k++)
      qscale += std::fabs(dot(d.bs_gamma_staggered[k], stag->normals[k])) *
                stag->area_weights[k];
    CHECK(std::fabs(d.flux_defect) < 1e-3 * qscale);
  }
}

TEST_CASE("direct fredholm solve") {
  Setup s = make_setup(24);

  SUBCASE("constant data returns the constant density") {
    std::vector<double> f(s.plain->size(), 0.7);
    DirectSolveResult r = solve_g_direct(*s.traces, f);
    for (double v : r.g) CHECK(v == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(r.residual <= 1e-10);
  }

  SUBCASE("zero data returns zero (uniqueness)") {
    std::vector<double> f(s.plain->size(), 0.0);
    DirectSolveResult r = solve_g_direct(*s.traces, f);
    for (double v : r.g) CHECK(std::fabs(v) < 1e-14);
  }

  SUBCASE("round trip through the interior trace") {
    HarmonicSourceData d = compute_F(s.gamma, *s.traces);
    DirectSolveResult r = solve_g_direct(*s.traces, d.f_staggered());
    CHECK(r.residual <= 1e-10);
    auto back = s.traces->double_layer_interior_trace(r.g);
    double worst = 0, scale = 0;
    for (int k = 0; k < s.plain->size(); k++) {
      worst = std::max(worst, std::fabs(back[k] - d.f_staggered()[k]));
      scale = std::max(scale, std::fabs(d.f_staggered()[k]));
    }
    CHECK(worst <= 1e-8 * scale);
    CHECK(r.condition_estimate > 1.0);
  }

  SUBCASE("matrix-free path agrees with the dense path") {
    HarmonicSourceData d = compute_F(s.gamma, *s.traces);
    DirectSolveResult dense = solve_g_direct(*s.traces, d.f_staggered());
    DirectSolveResult iter = solve_g_direct(*s.traces, d.f_staggered(), 0);
    double worst = 0;
    for (int k = 0; k < s.plain->size(); k++)
      worst = std::max(worst, std::fabs(dense.g[k] - iter.g[k]));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("fixed point iteration") {
  Setup s = make_setup(24);
  HarmonicSourceData d = compute_F(s.gamma, *s.traces);

  SUBCASE("first iterate from zero is F pulled to the nodes") {
    FixedPointOptions one;
    one.max_iter = 1;
    FixedPointResult r = solve_g_fixed_point(*s.traces, d.f_staggered(), one);
    auto want = shift_staggered_to_plain(s.plain->n_theta, s.plain->n_phi, d.f_staggered());
    REQUIRE(r.g.size() == want.size());
    for (std::size_t k = 0; k < want.size(); k++) CHECK(r.g[k] == want[k]);
  }

  SUBCASE("residual history decays and the fixed point matches the direct solve") {
    FixedPointResult r = solve_g_fixed_point(*s.traces, d.f_staggered());
    CHECK(r.converged);
    CHECK(r.iterations_used < 200);
    for (std::size_t i = 1; i < r.residual_history.size(); i++)
      CHECK(r.residual_history[i] <= 1.05 * r.residual_history[i - 1]);

    DirectSolveResult dir = solve_g_direct(*s.traces, d.f_staggered());
    double mean = 0;
    for (int k = 0; k < s.plain->size(); k++) mean += r.g[k] - dir.g[k];
    mean /= s.plain->size();
    double num = 0, den = 0;
    for (int k = 0; k < s.plain->size(); k++) {
      num += (r.g[k] - dir.g[k] - mean) * (r.g[k] - dir.g[k] - mean);
      den += dir.g[k] * dir.g[k];
    }
    CHECK(std::sqrt(num / den) < 1e-3);
  }

  SUBCASE("under-relaxed schedule still converges") {
    FixedPointOptions relaxed;
    relaxed.relaxation = 0.6;
    relaxed.max_iter = 800;
    FixedPointResult r = solve_g_fixed_point(*s.traces, d.f_staggered(), relaxed);
    CHECK(r.converged);
  }

  SUBCASE("invalid relaxation is rejected") {
    FixedPointOptions bad;
    bad.relaxation = 2.5;
    CHECK_THROWS_AS(solve_g_fixed_point(*s.traces, d.f_staggered(), bad), std::invalid_argument);
  }

  SUBCASE("discrete affine update is firmly non-expansive in the weighted inner product") {
    std::mt19937 rng(21);
    std::normal_distribution<double> nd;
    const int n = s.plain->size();
    for (int trial = 0; trial < 4; trial++) {
      std::vector<double> diff(n);
      for (auto& v : diff) v = nd(rng);
      auto td = s.traces->double_layer_interior_trace(diff);
      auto back = shift_staggered_to_plain(s.plain->n_theta, s.plain->n_phi, td);
      std::vector<double> sd(n);
      for (int k = 0; k < n; k++) sd[k] = diff[k] - back[k];
      double ss = 0, ds = 0, dd = 0;
      for (int k = 0; k < n; k++) {
        double w = s.plain->area_weights[k];
        ss += w * sd[k] * sd[k];
        ds += w * diff[k] * sd[k];
        dd += w * diff[k] * diff[k];
      }
      CHECK(ss <= ds + 1e-6 * dd);
    }
  }
}

TEST_CASE("kernel current construction and verification") {
  Setup s = make_setup(32);
  HarmonicSourceData d = compute_F(s.gamma, *s.traces);
  DirectSolveResult dir = solve_g_direct(*s.traces, d.f_staggered());
  KernelSolution sol = assemble_j0(s.gamma, *s.traces, dir.g);

  SUBCASE("constant g leaves only the rotated trace term") {
    std::vector<double> cg(s.plain->size(), 2.0);
    KernelSolution base = assemble_j0(s.gamma, *s.traces, cg);
    for (int k = 0; k < s.plain->size(); k++) CHECK(norm(base.j0[k] - base.j1[k]) < 1e-12);
  }

  SUBCASE("j0 is tangent and weakly divergence-free") {
    for (int k = 0; k < s.plain->size(); k++)
      CHECK(std::fabs(dot(sol.j0[k], s.plain->normals[k])) < 1e-12);
    CHECK(weak_divergence_defect(*s.plain, sol.j0, 3) < 1e-6);
  }

  SUBCASE("pairing against Gamma is minus one; the gradient part pairs to zero") {
    CHECK(std::fabs(sol.pairing_value + 1.0) < 2e-3);
    CHECK(std::fabs(sol.gradient_pairing) < 1e-8);
  }

  SUBCASE("the induced field vanishes inside, against the j1 contrast") {
    std::vector<Vec3> probes;
    for (int k = 0; k < 24; k++) {
      double th = 2 * pi * k / 24.0, ph = 2 * pi * ((k * 7) % 24) / 24.0;
      double r = 0.5 * (k % 5) / 4.0;
      double w = 3 + r * std::cos(th);
      probes.push_back({w * std::cos(ph), w * std::sin(ph), r * std::sin(th)});
    }
    double resid = verify_kernel(*s.plain, sol, probes);
    CHECK(resid < 5e-2);

    KernelSolution j1_only = sol;
    std::vector<double> zero_g(s.plain->size(), 0.0);
    KernelSolution base = assemble_j0(s.gamma, *s.traces, zero_g);
    double resid_j1 = verify_kernel(*s.plain, base, probes);
    CHECK(resid_j1 > 0.2);

    SUBCASE("scaling j0 scales both sides of the residual") {
      KernelSolution scaled = sol;
      for (auto& v : scaled.j0) v *= 3.0;
      for (auto& v : scaled.j1) v *= 3.0;
      double r2 = verify_kernel(*s.plain, scaled, probes);
      CHECK(r2 == doctest::Approx(resid).epsilon(1e-12));
    }
  }
}

TEST_CASE("nullspace svd isolates the kernel direction") {
  Setup s = make_setup(32);
  CurrentBasis basis(s.plain, 4, 4, true, true);
  // angular probe counts exceed twice the mode range: no aliased patterns
  ProbeSet probes = interior_probes(standard_torus(), 0.6, 3, 13, 15, false);
  ForwardMap fwd = assemble_forward(basis, probes);
  Matrix mass = basis.mass_matrix();
  NullspaceResult null = nullspace_svd(fwd, mass);

  REQUIRE(static_cast<int>(null.spectrum.size()) == basis.size());
  CHECK(null.gap_ratio > 10);
  for (std::size_t i = 1; i < null.spectrum.size(); i++)
    CHECK(null.spectrum[i] <= null.spectrum[i - 1]);

  SUBCASE("no zero rows in the forward matrix") {
    for (std::size_t r = 0; r < fwd.a.rows(); r += 7) {
      double rn = 0;
      for (std::size_t c = 0; c < fwd.a.cols(); c++) rn += std::fabs(fwd.a(r, c));
      CHECK(rn > 0);
    }
  }

  SUBCASE("smallest singular vector matches the constructed j0") {
    HarmonicSourceData d = compute_F(s.gamma, *s.traces);
    DirectSolveResult dir = solve_g_direct(*s.traces, d.f_staggered());
    KernelSolution sol = assemble_j0(s.gamma, *s.traces, dir.g);
    auto proj = project_onto_basis(basis, sol.j0);
    CHECK(mass_cosine(mass, null.kernel_coeffs, proj) > 0.9);
  }

  SUBCASE("adding the kernel direction leaves probe fields unchanged") {
    HarmonicSourceData d = compute_F(s.gamma, *s.traces);
    DirectSolveResult dir = solve_g_direct(*s.traces, d.f_staggered());
    KernelSolution sol = assemble_j0(s.gamma, *s.traces, dir.g);
    auto proj = project_onto_basis(basis, sol.j0);

    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    std::vector<double> c(basis.size()), shifted(basis.size());
    for (auto& v : c) v = nd(rng);
    const double alpha = 2.0;
    for (int k = 0; k < basis.size(); k++) shifted[k] = c[k] + alpha * proj[k];

    auto fc = fwd.field(c);
    auto fs = fwd.field(shifted);
    auto fj1 = bs_eval_many(*s.plain, sol.j1, fwd.probes.points);
    double dmax = 0, scale = 0;
    for (int p = 0; p < fwd.probes.total(); p++) {
      dmax = std::max(dmax, norm(fs[p] - fc[p]));
      scale = std::max(scale, norm(fj1[p].b));
    }
    double resid = verify_kernel(*s.plain, sol, fwd.probes.points);
    CHECK(dmax <= 2.0 * alpha * resid * scale + 1e-12);
  }
}
