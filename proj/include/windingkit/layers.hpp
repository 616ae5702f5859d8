#ifndef WINDINGKIT_LAYERS_HPP
#define WINDINGKIT_LAYERS_HPP

#include <memory>
#include <span>
#include <vector>

#include "windingkit/geometry.hpp"
#include "windingkit/linalg.hpp"
#include "windingkit/vec3.hpp"

namespace wk {

// Laplace layer potentials over a closed toroidal surface, discretized by
// periodic trapezoidal (Nystrom) quadrature on the plain grid.
//
// Off-surface targets use the plain node sum, which is spectrally accurate
// away from the surface. Boundary traces are collocated on the companion
// staggered grid, where the half-cell offset keeps the kernel finite; the
// remaining O(h) quadrature defect of the weakly singular kernels is removed
// by subtraction:
//   - double layer: K[g] + g/2 with the exact solid angle, i.e.
//     K_corr[g] = K_naive[g] + g_t (1/2 - K_naive[1]); the discrete trace of
//     the constant density is exactly 1;
//   - single layer: S_corr[q] = S_naive[q] - q_t * e1, where e1 is the
//     density-independent defect S_naive[1] - S[1] measured once per grid
//     against an upsampled source grid (odd factor, Richardson-completed)
//     and spectrally interpolated from a coarse staggered sample.

// Single/double layer sums at arbitrary off-node targets.
double single_layer_point(const SurfaceGrid& src, std::span<const double> density, const Vec3& x);
Vec3 single_layer_point(const SurfaceGrid& src, std::span<const Vec3> density, const Vec3& x);
double double_layer_point(const SurfaceGrid& src, std::span<const double> g, const Vec3& x);

std::vector<double> single_layer(const SurfaceGrid& src, std::span<const double> density,
                                 std::span<const Vec3> targets);
std::vector<Vec3> single_layer(const SurfaceGrid& src, std::span<const Vec3> density,
                               std::span<const Vec3> targets);
// w_Omega[g] at strictly interior/exterior points.
std::vector<double> double_layer_w(const SurfaceGrid& src, std::span<const double> g,
                                   std::span<const Vec3> targets);

struct TraceOptions {
  int fine_factor = 5;     // odd upsampling factor for the e1 reference pass
  int e1_subsample = 32;   // coarse staggered sample per dimension (0 = full)
};

// Boundary-trace machinery bound to a plain/staggered grid pair.
class BoundaryTraces {
 public:
  BoundaryTraces(std::shared_ptr<const SurfaceGrid> plain,
                 std::shared_ptr<const SurfaceGrid> staggered, TraceOptions opt = {});

  const SurfaceGrid& plain() const { return *plain_; }
  const SurfaceGrid& staggered() const { return *staggered_; }
  std::shared_ptr<const SurfaceGrid> plain_ptr() const { return plain_; }
  std::shared_ptr<const SurfaceGrid> staggered_ptr() const { return staggered_; }
  const std::vector<double>& e1() const { return e1_; }

  // Corrected on-surface values at the staggered nodes.
  std::vector<double> single_layer_trace(std::span<const double> density_plain) const;
  std::vector<Vec3> single_layer_trace(std::span<const Vec3> density_plain) const;

  // Interior trace of the double layer, K[g] + g/2, at the staggered nodes.
  std::vector<double> double_layer_interior_trace(std::span<const double> g_plain) const;

  // Dense interior-trace operator (staggered rows x plain columns).
  Matrix dense_interior_trace() const;

  // Identity coupling of the Nyquist Fourier lines, which the half-cell
  // collocation cannot observe; part of the interior-trace operator.
  std::vector<double> nyquist_transfer(std::span<const double> g_plain) const;

 private:
  std::shared_ptr<const SurfaceGrid> plain_, staggered_;
  std::vector<double> e1_;        // single-layer defect at staggered nodes
  std::vector<double> dl_naive1_; // naive double-layer row sums at staggered nodes
};

// Dense discretized layer-potential map for spec-level introspection/tests.
struct LayerOperator {
  enum class Kind { single, double_ };
  Kind kind;
  std::shared_ptr<const SurfaceGrid> source;
  std::vector<Vec3> targets;
  Matrix matrix;  // targets x source nodes
};

LayerOperator assemble_layer_operator(LayerOperator::Kind kind,
                                      std::shared_ptr<const SurfaceGrid> source,
                                      std::vector<Vec3> targets);

}  // namespace wk

#endif
