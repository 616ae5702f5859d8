#include "windingkit/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wk {

using nlohmann::json;

namespace {

Vec3 parse_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("config: expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

TorusSurface parse_surface(const json& j) {
  TorusSurface s;
  s.major_radius = j.value("major_radius", 3.0);
  s.minor_radius = j.value("minor_radius", 1.0);
  if (j.contains("perturbation"))
    for (const auto& p : j["perturbation"])
      s.perturbation.push_back({p.value("m", 0), p.value("n", 0), p.value("amplitude", 0.0)});
  if (j.contains("pose")) {
    const auto& p = j["pose"];
    double angle = p.value("angle", 0.0);
    Vec3 axis = p.contains("axis") ? parse_vec3(p["axis"]) : Vec3{0, 0, 1};
    s.pose.rotation = angle != 0.0 ? Mat3::rotation(axis, angle) : Mat3::identity();
    if (p.contains("translation")) s.pose.translation = parse_vec3(p["translation"]);
  }
  s.validate();
  return s;
}

json surface_to_json(const TorusSurface& s) {
  json j;
  j["major_radius"] = s.major_radius;
  j["minor_radius"] = s.minor_radius;
  if (!s.perturbation.empty()) {
    json arr = json::array();
    for (const auto& p : s.perturbation)
      arr.push_back({{"m", p.m}, {"n", p.n}, {"amplitude", p.amplitude}});
    j["perturbation"] = arr;
  }
  json pose;
  pose["rotation_rows"] = json::array({
      json::array({s.pose.rotation.m[0], s.pose.rotation.m[1], s.pose.rotation.m[2]}),
      json::array({s.pose.rotation.m[3], s.pose.rotation.m[4], s.pose.rotation.m[5]}),
      json::array({s.pose.rotation.m[6], s.pose.rotation.m[7], s.pose.rotation.m[8]})});
  pose["translation"] = vec3_to_json(s.pose.translation);
  j["pose"] = pose;
  return j;
}

}  // namespace

double ExperimentConfig::cws_spacing() const {
  // sqrt of the largest quadrature cell of the CWS grid
  SurfaceGrid g = build_surface(cws, grid.n_theta, grid.n_phi, false);
  double w = 0;
  for (double a : g.area_weights) w = std::max(w, a);
  return std::sqrt(w);
}

void ExperimentConfig::validate_containment(const TorusSurface& plasma_domain) const {
  double margin = margin_spacings * cws_spacing();
  SurfaceGrid boundary = build_surface(plasma_domain, 32, 32, false);
  for (const auto& x : boundary.nodes) {
    double gap = cws.radial_gap(x);
    if (gap < margin)
      throw std::invalid_argument("config: plasma domain violates the containment margin (gap " +
                                  std::to_string(gap) + " < " + std::to_string(margin) + ")");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  if (j.contains("grid")) {
    cfg.grid.n_theta = j["grid"].value("n_theta", 64);
    cfg.grid.n_phi = j["grid"].value("n_phi", 64);
  }
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    if (g.contains("cws")) cfg.cws = parse_surface(g["cws"]);
    if (g.contains("plasma")) cfg.plasma = parse_surface(g["plasma"]);
    if (g.contains("plasma_case_a")) cfg.plasma_case_a = parse_surface(g["plasma_case_a"]);
    if (g.contains("plasma_case_b")) cfg.plasma_case_b = parse_surface(g["plasma_case_b"]);
  }
  if (j.contains("basis")) {
    const auto& b = j["basis"];
    cfg.basis.m_max = b.value("m_max", 8);
    cfg.basis.n_max = b.value("n_max", 8);
    cfg.basis.secular_poloidal = b.value("secular_poloidal", true);
    cfg.basis.secular_toroidal = b.value("secular_toroidal", true);
  }
  if (j.contains("probes")) {
    const auto& p = j["probes"];
    cfg.probes.shrink = p.value("shrink", 0.5);
    cfg.probes.n_r = p.value("n_r", 3);
    cfg.probes.n_theta = p.value("n_theta", 8);
    cfg.probes.n_phi = p.value("n_phi", 16);
    cfg.probes.clusters = p.value("clusters", true);
    cfg.probes.fd_delta = p.value("fd_delta", 1e-4);
  }
  if (j.contains("lambda")) {
    const auto& l = j["lambda"];
    cfg.lambda.count = l.value("count", 24);
    cfg.lambda.lo_rel = l.value("lo_rel", 1e-10);
    cfg.lambda.hi_rel = l.value("hi_rel", 1e2);
  }
  if (j.contains("target")) {
    const auto& t = j["target"];
    cfg.target.kind = t.value("kind", std::string("azimuthal_wire"));
    if (t.contains("point")) cfg.target.point = parse_vec3(t["point"]);
    if (t.contains("direction")) cfg.target.direction = parse_vec3(t["direction"]);
    cfg.target.radius = t.value("radius", 1.0);
    cfg.target.current = t.value("current", 1.0);
    cfg.target.unit_norm = t.value("unit_norm", false);
    cfg.target.about_plasma_axis = t.value("about_plasma_axis", true);
  }
  if (j.contains("kernel")) {
    const auto& k = j["kernel"];
    cfg.kernel.fixed_point.tol = k.value("fp_tol", 1e-8);
    cfg.kernel.fixed_point.max_iter = k.value("fp_max_iter", 500);
    cfg.kernel.fixed_point.relaxation = k.value("relaxation", 1.0);
    cfg.kernel.trace.fine_factor = k.value("fine_factor", 5);
    cfg.kernel.trace.e1_subsample = k.value("e1_subsample", 32);
    cfg.kernel.probe_shrink = k.value("probe_shrink", 0.6);
    cfg.kernel.n_probes = k.value("n_probes", 64);
    cfg.kernel.tol_pairing = k.value("tol_pairing", 1e-3);
    cfg.kernel.tol_residual = k.value("tol_residual", 1e-2);
    cfg.kernel.dense_limit = k.value("dense_limit", 6000);
  }
  if (j.contains("solenoid")) {
    const auto& s = j["solenoid"];
    if (s.contains("refinements")) cfg.solenoid.refinements = s["refinements"].get<std::vector<int>>();
    cfg.solenoid.tolerance = s.value("tolerance", 1e-6);
    cfg.solenoid.probe_minor_radius = s.value("probe_minor_radius", 0.2);
    cfg.solenoid.n_probes = s.value("n_probes", 50);
    cfg.solenoid.exterior_distance = s.value("exterior_distance", 1.0);
  }
  cfg.margin_spacings = j.value("margin_spacings", 2.0);
  cfg.seed = j.value("seed", 1234u);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["grid"] = {{"n_theta", cfg.grid.n_theta}, {"n_phi", cfg.grid.n_phi}};
  j["geometry"]["cws"] = surface_to_json(cfg.cws);
  if (cfg.plasma) j["geometry"]["plasma"] = surface_to_json(*cfg.plasma);
  if (cfg.plasma_case_a) j["geometry"]["plasma_case_a"] = surface_to_json(*cfg.plasma_case_a);
  if (cfg.plasma_case_b) j["geometry"]["plasma_case_b"] = surface_to_json(*cfg.plasma_case_b);
  j["basis"] = {{"m_max", cfg.basis.m_max},
                {"n_max", cfg.basis.n_max},
                {"secular_poloidal", cfg.basis.secular_poloidal},
                {"secular_toroidal", cfg.basis.secular_toroidal}};
  j["probes"] = {{"shrink", cfg.probes.shrink},   {"n_r", cfg.probes.n_r},
                 {"n_theta", cfg.probes.n_theta}, {"n_phi", cfg.probes.n_phi},
                 {"clusters", cfg.probes.clusters}, {"fd_delta", cfg.probes.fd_delta}};
  j["lambda"] = {{"count", cfg.lambda.count},
                 {"lo_rel", cfg.lambda.lo_rel},
                 {"hi_rel", cfg.lambda.hi_rel}};
  j["target"] = {{"kind", cfg.target.kind},
                 {"point", vec3_to_json(cfg.target.point)},
                 {"direction", vec3_to_json(cfg.target.direction)},
                 {"radius", cfg.target.radius},
                 {"current", cfg.target.current},
                 {"unit_norm", cfg.target.unit_norm},
                 {"about_plasma_axis", cfg.target.about_plasma_axis}};
  j["kernel"] = {{"fp_tol", cfg.kernel.fixed_point.tol},
                 {"fp_max_iter", cfg.kernel.fixed_point.max_iter},
                 {"relaxation", cfg.kernel.fixed_point.relaxation},
                 {"fine_factor", cfg.kernel.trace.fine_factor},
                 {"e1_subsample", cfg.kernel.trace.e1_subsample},
                 {"probe_shrink", cfg.kernel.probe_shrink},
                 {"n_probes", cfg.kernel.n_probes},
                 {"tol_pairing", cfg.kernel.tol_pairing},
                 {"tol_residual", cfg.kernel.tol_residual},
                 {"dense_limit", cfg.kernel.dense_limit}};
  j["solenoid"] = {{"refinements", cfg.solenoid.refinements},
                   {"tolerance", cfg.solenoid.tolerance},
                   {"probe_minor_radius", cfg.solenoid.probe_minor_radius},
                   {"n_probes", cfg.solenoid.n_probes},
                   {"exterior_distance", cfg.solenoid.exterior_distance}};
  j["margin_spacings"] = cfg.margin_spacings;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

TargetField make_target(const TargetSpec& spec, const TorusSurface& plasma) {
  if (spec.kind == "azimuthal_wire") {
    TargetField t = spec.about_plasma_axis
                        ? azimuthal_wire(plasma.axis_point(), plasma.axis_direction())
                        : azimuthal_wire(spec.point, spec.direction);
    t.current = spec.current;
    return t;
  }
  if (spec.kind == "point_source") return point_source_unchecked(spec.point);
  if (spec.kind == "circular_loop")
    return circular_loop(spec.point, spec.direction, spec.radius, spec.current);
  if (spec.kind == "plasma_neumann") return plasma_neumann(plasma, spec.unit_norm);
  throw std::invalid_argument("config: unknown target kind '" + spec.kind + "'");
}

}  // namespace wk
