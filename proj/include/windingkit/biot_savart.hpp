#ifndef WINDINGKIT_BIOT_SAVART_HPP
#define WINDINGKIT_BIOT_SAVART_HPP

#include <memory>
#include <span>
#include <vector>

#include "windingkit/currents.hpp"
#include "windingkit/geometry.hpp"
#include "windingkit/layers.hpp"
#include "windingkit/linalg.hpp"
#include "windingkit/vec3.hpp"
#include "windingkit/volume.hpp"

namespace wk {

// Near-surface accuracy guard for field evaluation. Targets closer than
// guard_factor grid spacings get the source refined (spectral upsampling) by
// the smallest power of two restoring that clearance; the guard flag is
// still raised for such points.
struct BsGuard {
  double guard_factor = 2.0;
  int max_upsample = 8;
};

struct BsSample {
  Vec3 b{};
  bool guard_violated = false;
  int upsample_used = 1;
};

// BS_S(j)(x) = (1/4pi) sum_y j(y) x (x - y)/|x - y|^3 w(y).
BsSample bs_eval(const SurfaceGrid& grid, std::span<const Vec3> j, const Vec3& x,
                 const BsGuard& guard = {});
std::vector<BsSample> bs_eval_many(const SurfaceGrid& grid, std::span<const Vec3> j,
                                   std::span<const Vec3> points, const BsGuard& guard = {});

// Same field from basis coefficients; upsampled levels are evaluated
// analytically on refined grids instead of interpolated.
std::vector<BsSample> bs_eval_many(const CurrentBasis& basis, std::span<const double> coeffs,
                                   std::span<const Vec3> points, const BsGuard& guard = {});

// Discretized forward operator over a current basis: row block 3p..3p+2
// holds the field at probe p, column k the field of basis element k.
// Quadrature weights stay outside the matrix.
struct ForwardMap {
  Matrix a;  // (3 * probes.total()) x basis.size()
  ProbeSet probes;
  int n_basis = 0;
  bool guard_flagged = false;

  std::vector<Vec3> field(std::span<const double> coeffs) const;
};

ForwardMap assemble_forward(const CurrentBasis& basis, ProbeSet probes, const BsGuard& guard = {});

// Volume Biot-Savart field of a harmonic Neumann field via its boundary
// representation, BS_Omega(Gamma)(x) = -(1/4pi) int (N x Gamma)/|x-y| dsigma.
std::vector<Vec3> bs_volume_gamma(const HarmonicNeumannField& gamma, const SurfaceGrid& cws,
                                  std::span<const Vec3> targets);
// Its boundary trace on the staggered companion grid.
std::vector<Vec3> bs_volume_gamma_trace(const HarmonicNeumannField& gamma,
                                        const BoundaryTraces& traces);

struct FieldMetrics {
  double residual_l2_sq = 0;  // ||B - B_T||^2_{L2(P)} by probe quadrature
  double c0_error = 0;        // sup |B - B_T| over base probes
  double c1_error = 0;        // c0 + sup Frobenius norm of the FD Jacobian
};

FieldMetrics field_metrics(std::span<const Vec3> field, std::span<const Vec3> target,
                           const ProbeSet& probes);

}  // namespace wk

#endif
