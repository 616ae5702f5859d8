#include "windingkit/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "windingkit/tikhonov.hpp"
#include "windingkit/volume.hpp"

namespace wk {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = kToolVersion;
  m["command"] = command;
  m["outputs"] = outputs;
  m["config"] = json::parse(config_to_json(cfg));
  write_atomic(out_dir / "manifest.json", m.dump(2) + "\n");
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << "lambda,objective,residual_l2_sq,current_l2_sq,bound_ratio,c0_error,c1_error\n";
  for (const auto& r : records)
    out << num17(r.lambda) << ',' << num17(r.objective) << ',' << num17(r.residual_sq) << ','
        << num17(r.current_norm_sq) << ',' << num17(r.bound_ratio) << ',' << num17(r.c0_error)
        << ',' << num17(r.c1_error) << '\n';
  return out.str();
}

double frac(double x) { return x - std::floor(x); }

// Deterministic interior probe scatter: minor radii sweep [0, r_max] with a
// golden-angle spread in both angles.
std::vector<Vec3> scatter_probes(const TorusSurface& t, double minor_max, int count) {
  std::vector<Vec3> pts(count);
  for (int k = 0; k < count; k++) {
    double r = minor_max * (count > 1 ? double(k) / (count - 1) : 0.0);
    double th = 2 * pi * frac(0.6180339887498949 * k);
    double ph = 2 * pi * frac(0.3819660112501051 * k + 0.25);
    double w = t.major_radius + r * std::cos(th);
    pts[k] = t.pose.apply_point({w * std::cos(ph), w * std::sin(ph), r * std::sin(th)});
  }
  return pts;
}

InverseProblem build_problem(const ExperimentConfig& cfg, const TorusSurface& plasma,
                             const TargetField& target,
                             std::shared_ptr<const SurfaceGrid>& grid_out) {
  auto grid = std::make_shared<SurfaceGrid>(
      build_surface(cfg.cws, cfg.grid.n_theta, cfg.grid.n_phi, false));
  grid_out = grid;
  CurrentBasis basis(grid, cfg.basis.m_max, cfg.basis.n_max, cfg.basis.secular_poloidal,
                     cfg.basis.secular_toroidal);
  ProbeSet probes = interior_probes(plasma, cfg.probes.shrink, cfg.probes.n_r,
                                    cfg.probes.n_theta, cfg.probes.n_phi, cfg.probes.clusters,
                                    cfg.probes.fd_delta);
  ForwardMap fwd = assemble_forward(basis, probes);
  auto samples = target.sample(fwd.probes.points);
  std::vector<double> b(3 * samples.size());
  for (std::size_t p = 0; p < samples.size(); p++) {
    b[3 * p] = samples[p].x;
    b[3 * p + 1] = samples[p].y;
    b[3 * p + 2] = samples[p].z;
  }
  return InverseProblem(std::move(fwd), basis.mass_matrix(), std::move(b));
}

}  // namespace

int cmd_solenoid_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "n_theta,n_phi,interior_max_rel_err,exterior_leak_rel,zero_current_max\n";

  const double r0 = cfg.cws.major_radius, a = cfg.cws.minor_radius;
  std::vector<double> interior_errs;
  double final_interior = 0, final_exterior = 0;
  bool ok = true;

  // raw quadrature, no near-field upsampling: the table measures the
  // discretization error itself
  BsGuard raw;
  raw.guard_factor = 0.0;
  raw.max_upsample = 1;

  for (int n : cfg.solenoid.refinements) {
    auto grid = std::make_shared<SurfaceGrid>(build_surface(cfg.cws, n, n, false));
    CurrentBasis basis(grid, 0, 0, true, false);  // secular poloidal sheet only
    std::vector<double> unit{1.0}, zero{0.0};

    auto probes = scatter_probes(cfg.cws, cfg.solenoid.probe_minor_radius * a,
                                 cfg.solenoid.n_probes);
    auto fields = bs_eval_many(basis, unit, probes, raw);
    double max_rel = 0;
    for (std::size_t k = 0; k < probes.size(); k++) {
      Vec3 p = cfg.cws.pose.inverse_point(probes[k]);
      double rho2 = p.x * p.x + p.y * p.y;
      Vec3 ref = cfg.cws.pose.apply_vector(Vec3{-p.y, p.x, 0} / (2 * pi * rho2));
      max_rel = std::max(max_rel, norm(fields[k].b - ref) / norm(ref));
    }

    // exterior ring at the configured clearance, plus a point over the tube
    double d = cfg.solenoid.exterior_distance;
    std::vector<Vec3> ext;
    for (int k = 0; k < 8; k++) {
      double ph = 2 * pi * k / 8;
      ext.push_back(cfg.cws.pose.apply_point({(r0 + a + d) * std::cos(ph),
                                              (r0 + a + d) * std::sin(ph), 0}));
      ext.push_back(cfg.cws.pose.apply_point({r0 * std::cos(ph), r0 * std::sin(ph), a + d}));
    }
    auto leak_fields = bs_eval_many(basis, unit, ext, raw);
    double scale = 2 * pi * r0;  // 1 / B(tube core)
    double leak = 0;
    for (const auto& s : leak_fields) leak = std::max(leak, norm(s.b) * scale);

    auto zfields = bs_eval_many(basis, zero, probes, raw);
    double zmax = 0;
    for (const auto& s : zfields) zmax = std::max(zmax, norm(s.b));

    csv << n << ',' << n << ',' << num17(max_rel) << ',' << num17(leak) << ',' << num17(zmax)
        << '\n';
    interior_errs.push_back(max_rel);
    final_interior = max_rel;
    final_exterior = leak;
    if (zmax != 0.0) ok = false;
  }

  for (std::size_t i = 1; i < interior_errs.size(); i++)
    if (interior_errs[i] > interior_errs[i - 1] && interior_errs[i] > cfg.solenoid.tolerance)
      ok = false;
  if (final_interior > cfg.solenoid.tolerance || final_exterior > cfg.solenoid.tolerance)
    ok = false;

  write_atomic(fs::path(out_dir) / "solenoid_check.csv", csv.str());
  write_manifest(out_dir, "solenoid-check", cfg, {"solenoid_check.csv"});
  if (!ok) std::cerr << "solenoid-check: tolerance failure\n";
  return ok ? 0 : 2;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (!cfg.plasma) throw std::invalid_argument("sweep: config lacks geometry.plasma");
  cfg.validate_containment(*cfg.plasma);
  fs::create_directories(out_dir);

  TargetField target = make_target(cfg.target, *cfg.plasma);
  std::shared_ptr<const SurfaceGrid> grid;
  InverseProblem problem = build_problem(cfg, *cfg.plasma, target, grid);
  auto lgrid = default_lambda_grid(problem, cfg.lambda.count, cfg.lambda.lo_rel,
                                   cfg.lambda.hi_rel);
  SweepResult res = sweep(problem, lgrid);

  write_atomic(fs::path(out_dir) / "sweep.csv", sweep_csv(res.records));
  write_manifest(out_dir, "sweep", cfg, {"sweep.csv"});

  bool ok = res.objective_monotone;
  for (const auto& r : res.records)
    if (r.bound_ratio > 1.0 + 1e-10) ok = false;
  if (!ok) std::cerr << "sweep: monotonicity/bound violation\n";
  return ok ? 0 : 2;
}

int cmd_kernel(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const int nt = cfg.grid.n_theta, np = cfg.grid.n_phi;

  auto plain = std::make_shared<SurfaceGrid>(build_surface(cfg.cws, nt, np, false));
  auto stag = std::make_shared<SurfaceGrid>(build_surface(cfg.cws, nt, np, true));
  BoundaryTraces traces(plain, stag, cfg.kernel.trace);
  HarmonicNeumannField gamma = normalize_gamma(cfg.cws);

  HarmonicSourceData fdata = compute_F(gamma, traces);

  FixedPointResult fp = solve_g_fixed_point(traces, fdata.f_staggered(), cfg.kernel.fixed_point);
  bool have_direct = plain->size() <= cfg.kernel.dense_limit;
  DirectSolveResult direct;
  double agreement = -1;
  if (have_direct) {
    direct = solve_g_direct(traces, fdata.f_staggered(), cfg.kernel.dense_limit);
    // compare modulo the additive constant (only grad_S g matters)
    double dsum = 0;
    for (int k = 0; k < plain->size(); k++) dsum += fp.g[k] - direct.g[k];
    double mean = dsum / plain->size();
    double num = 0, den = 0;
    for (int k = 0; k < plain->size(); k++) {
      double d = fp.g[k] - direct.g[k] - mean;
      num += d * d * plain->area_weights[k];
      den += direct.g[k] * direct.g[k] * plain->area_weights[k];
    }
    agreement = den > 0 ? std::sqrt(num / den) : 0.0;
  }

  KernelSolution sol = assemble_j0(gamma, traces, have_direct ? direct.g : fp.g);
  sol.iterations_used = fp.iterations_used;
  sol.fp_residual_history = fp.residual_history;

  auto probes = scatter_probes(cfg.cws, cfg.kernel.probe_shrink * cfg.cws.minor_radius,
                               cfg.kernel.n_probes);
  sol.kernel_residual = verify_kernel(*plain, sol, probes);

  // kernel dimension surrogate: SVD of the forward map over a dense interior set
  CurrentBasis basis(plain, cfg.basis.m_max, cfg.basis.n_max, cfg.basis.secular_poloidal,
                     cfg.basis.secular_toroidal);
  ProbeSet svd_probes = interior_probes(cfg.cws, cfg.kernel.probe_shrink, 4, 10, 20, false);
  ForwardMap fwd = assemble_forward(basis, svd_probes);
  NullspaceResult null = nullspace_svd(fwd, basis.mass_matrix());
  auto j0_coeffs = project_onto_basis(basis, sol.j0);
  double cosine = mass_cosine(basis.mass_matrix(), null.kernel_coeffs, j0_coeffs);

  json out;
  out["pairing_value"] = sol.pairing_value;
  out["kernel_residual"] = sol.kernel_residual;
  out["iterations"] = sol.iterations_used;
  out["fp_residual_history"] = sol.fp_residual_history;
  out["svd_spectrum"] = null.spectrum;
  out["svd_gap_ratio"] = null.gap_ratio;
  out["svd_cosine_j0"] = cosine;
  out["gradient_pairing"] = sol.gradient_pairing;
  out["flux_defect"] = fdata.flux_defect;
  out["fp_converged"] = fp.converged;
  if (have_direct) {
    out["fp_direct_agreement"] = agreement;
    out["direct_residual"] = direct.residual;
    out["direct_condition"] = direct.condition_estimate;
  }
  write_atomic(fs::path(out_dir) / "kernel.json", out.dump(2) + "\n");
  write_manifest(out_dir, "kernel", cfg, {"kernel.json"});

  bool ok = std::fabs(sol.pairing_value + 1.0) <= cfg.kernel.tol_pairing &&
            sol.kernel_residual <= cfg.kernel.tol_residual;
  if (!ok) std::cerr << "kernel: pairing or residual check failed\n";
  return ok ? 0 : 2;
}

int cmd_density(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (!cfg.plasma_case_a || !cfg.plasma_case_b)
    throw std::invalid_argument("density: config lacks plasma_case_a / plasma_case_b");
  cfg.validate_containment(*cfg.plasma_case_a);
  cfg.validate_containment(*cfg.plasma_case_b);
  fs::create_directories(out_dir);

  struct CaseRun {
    SweepResult sweep_result;
    double target_norm_sq = 0;
  };
  auto run_case = [&](const TorusSurface& plasma, std::vector<double>& lgrid,
                      bool build_grid) -> CaseRun {
    TargetField target = plasma_neumann(plasma, true);
    std::shared_ptr<const SurfaceGrid> grid;
    InverseProblem problem = build_problem(cfg, plasma, target, grid);
    if (build_grid)
      lgrid = default_lambda_grid(problem, cfg.lambda.count, cfg.lambda.lo_rel,
                                  cfg.lambda.hi_rel);
    return {sweep(problem, lgrid), problem.target_norm_sq()};
  };

  std::vector<double> lgrid;
  CaseRun case_b = run_case(*cfg.plasma_case_b, lgrid, true);
  CaseRun case_a = run_case(*cfg.plasma_case_a, lgrid, false);
  const SweepResult& res_a = case_a.sweep_result;
  const SweepResult& res_b = case_b.sweep_result;

  write_atomic(fs::path(out_dir) / "sweep_case_a.csv", sweep_csv(res_a.records));
  write_atomic(fs::path(out_dir) / "sweep_case_b.csv", sweep_csv(res_b.records));

  const auto& last_a = res_a.records.back();
  const auto& last_b = res_b.records.back();
  json summary;
  summary["lambda_last"] = last_a.lambda;
  summary["residual_rel_a"] = std::sqrt(last_a.residual_sq / case_a.target_norm_sq);
  summary["residual_rel_b"] = std::sqrt(last_b.residual_sq / case_b.target_norm_sq);
  summary["residual_ratio_a_over_b"] =
      last_b.residual_sq > 0 ? std::sqrt(last_a.residual_sq / last_b.residual_sq) : 0.0;
  summary["current_ratio_a_over_b"] =
      last_b.current_norm_sq > 0 ? std::sqrt(last_a.current_norm_sq / last_b.current_norm_sq)
                                 : 0.0;
  write_atomic(fs::path(out_dir) / "density_summary.json", summary.dump(2) + "\n");
  write_manifest(out_dir, "density", cfg,
                 {"sweep_case_a.csv", "sweep_case_b.csv", "density_summary.json"});
  return 0;
}

}  // namespace wk
