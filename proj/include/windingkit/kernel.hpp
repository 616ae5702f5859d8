#ifndef WINDINGKIT_KERNEL_HPP
#define WINDINGKIT_KERNEL_HPP

#include <memory>
#include <span>
#include <vector>

#include "windingkit/biot_savart.hpp"
#include "windingkit/currents.hpp"
#include "windingkit/geometry.hpp"
#include "windingkit/layers.hpp"
#include "windingkit/linalg.hpp"
#include "windingkit/volume.hpp"

namespace wk {

// Construction of the kernel current
//   j0 = BS_Omega(Gamma) x N - N x grad_S g,
// where g solves the interior Dirichlet jump equation (K + I/2) g = F and
//   F = (1/4pi) int (BS_Omega(Gamma) . N) / |x - y| dsigma(y).

// F and the intermediate boundary data of the pipeline.
struct HarmonicSourceData {
  std::vector<Vec3> bs_gamma_staggered;  // BS_Omega(Gamma) trace at staggered nodes
  ScalarGridFunction q_plain;            // BS_Omega(Gamma) . N moved to plain nodes
  ScalarGridFunction f;                  // F on the staggered grid
  double flux_defect = 0;                // int_S BS_Omega(Gamma) . N dsigma

  std::span<const double> f_staggered() const { return f.values; }
};

HarmonicSourceData compute_F(const HarmonicNeumannField& gamma, const BoundaryTraces& traces);

// F at points away from the surface (for harmonicity checks).
double eval_F_offsurface(const HarmonicSourceData& data, const BoundaryTraces& traces,
                         const Vec3& x);

// Dense Fredholm solve of (K + I/2) g = F, collocated at the staggered nodes.
// Falls back to matrix-free GMRES above `dense_limit` unknowns. The returned
// density lives on the plain grid with the (information-free) Nyquist lines
// projected out.
struct DirectSolveResult {
  std::vector<double> g;          // plain grid
  double residual = 0;            // ||T g - F|| / ||F||
  double condition_estimate = 0;  // only for the dense path
};
DirectSolveResult solve_g_direct(const BoundaryTraces& traces, std::span<const double> f_staggered,
                                 int dense_limit = 6000);

// Krasnoselskii-Mann iteration g <- g + lambda_n (F - T g) on boundary data,
// the boundary representation of X_{n+1} = X_n + lambda_n (S(X_n) - X_n).
// residual_history holds the L2(S) norms of the iteration steps, the
// discrete ||S(X_n) - X_n|| surrogate.
struct FixedPointOptions {
  double tol = 1e-8;        // relative step-norm stopping threshold
  int max_iter = 500;
  double relaxation = 1.0;  // lambda_n, constant schedule in (0, 2)
};

struct FixedPointResult {
  std::vector<double> g;  // plain grid
  std::vector<double> residual_history;
  int iterations_used = 0;
  bool converged = false;
};

FixedPointResult solve_g_fixed_point(const BoundaryTraces& traces,
                                     std::span<const double> f_staggered,
                                     const FixedPointOptions& opt = {});

struct KernelSolution {
  std::vector<double> g;     // double-layer density, plain grid
  std::vector<Vec3> j0, j1;  // plain grid; j1 = BS_Omega(Gamma) x N
  double pairing_value = 0;          // int_S j0 . Gamma dsigma  (= -||Gamma||^2 in theory)
  double gradient_pairing = 0;       // int_S (N x grad_S g) . Gamma dsigma  (= 0 in theory)
  double kernel_residual = -1;       // filled by verify_kernel
  int iterations_used = 0;           // from the fixed-point path, when used
  std::vector<double> fp_residual_history;
};

KernelSolution assemble_j0(const HarmonicNeumannField& gamma, const BoundaryTraces& traces,
                           std::span<const double> g_plain);

// max_probes |BS(j0)| / max_probes |BS(j1)|.
double verify_kernel(const SurfaceGrid& grid, const KernelSolution& sol,
                     std::span<const Vec3> probes, const BsGuard& guard = {});

// Singular spectrum of W^(1/2) A M^(-1/2); the kernel shows up as an isolated
// smallest singular value on a genus-1 surface.
struct NullspaceResult {
  std::vector<double> spectrum;        // descending
  double gap_ratio = 0;                // second-smallest / smallest
  std::vector<double> kernel_coeffs;   // candidate kernel direction, ||.||_M = 1
};

NullspaceResult nullspace_svd(const ForwardMap& forward, const Matrix& mass);

// L2(S)-projection of grid samples onto the basis span: solves M c = <basis, field>.
std::vector<double> project_onto_basis(const CurrentBasis& basis, std::span<const Vec3> field);

// M-inner-product cosine between coefficient vectors.
double mass_cosine(const Matrix& mass, std::span<const double> a, std::span<const double> b);

}  // namespace wk

#endif
