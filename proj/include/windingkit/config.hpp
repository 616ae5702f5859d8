#ifndef WINDINGKIT_CONFIG_HPP
#define WINDINGKIT_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "windingkit/geometry.hpp"
#include "windingkit/kernel.hpp"
#include "windingkit/layers.hpp"
#include "windingkit/targets.hpp"

namespace wk {

struct GridSpec {
  int n_theta = 64, n_phi = 64;
};

struct BasisSpec {
  int m_max = 8, n_max = 8;
  bool secular_poloidal = true, secular_toroidal = true;
};

struct ProbeSpec {
  double shrink = 0.5;
  int n_r = 3, n_theta = 8, n_phi = 16;
  bool clusters = true;
  double fd_delta = 1e-4;
};

struct LambdaSpec {
  int count = 24;
  double lo_rel = 1e-10, hi_rel = 1e2;
};

struct TargetSpec {
  std::string kind = "azimuthal_wire";
  Vec3 point{0, 0, 0};
  Vec3 direction{0, 0, 1};
  double radius = 1.0;
  double current = 1.0;
  bool unit_norm = false;
  bool about_plasma_axis = true;  // azimuthal_wire / plasma_neumann default axis
};

struct KernelSpec {
  FixedPointOptions fixed_point;
  TraceOptions trace;
  double probe_shrink = 0.6;
  int n_probes = 64;
  double tol_pairing = 1e-3;
  double tol_residual = 1e-2;
  int dense_limit = 6000;
};

struct SolenoidSpec {
  std::vector<int> refinements{32, 64};
  double tolerance = 1e-6;
  double probe_minor_radius = 0.2;
  int n_probes = 50;
  double exterior_distance = 1.0;
};

struct ExperimentConfig {
  GridSpec grid;
  TorusSurface cws;
  std::optional<TorusSurface> plasma;
  std::optional<TorusSurface> plasma_case_a;  // density experiment
  std::optional<TorusSurface> plasma_case_b;
  BasisSpec basis;
  ProbeSpec probes;
  LambdaSpec lambda;
  TargetSpec target;
  KernelSpec kernel;
  SolenoidSpec solenoid;
  double margin_spacings = 2.0;
  unsigned seed = 1234;

  // Characteristic CWS grid spacing used for containment margins.
  double cws_spacing() const;
  // Throws std::invalid_argument when a configured plasma domain is not
  // contained in the coil-winding volume with the required margin.
  void validate_containment(const TorusSurface& plasma_domain) const;
};

ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

TargetField make_target(const TargetSpec& spec, const TorusSurface& plasma);

}  // namespace wk

#endif
