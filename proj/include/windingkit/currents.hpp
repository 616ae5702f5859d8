#ifndef WINDINGKIT_CURRENTS_HPP
#define WINDINGKIT_CURRENTS_HPP

#include <memory>
#include <span>
#include <vector>

#include "windingkit/geometry.hpp"
#include "windingkit/linalg.hpp"
#include "windingkit/vec3.hpp"

namespace wk {

// One Fourier element of the current potential, Phi = cos/sin(m theta - n phi).
struct FourierMode {
  int m = 0, n = 0;
  bool sine = false;
};

// Divergence-free tangent currents as rotated gradients of a current
// potential, j = N x grad_S(Phi), plus up to two secular sheets carrying the
// net loop currents of the genus-1 surface. Basis ordering: secular poloidal,
// secular toroidal, then Fourier modes lexicographic in (m, n, parity).
class CurrentBasis {
 public:
  CurrentBasis(std::shared_ptr<const SurfaceGrid> grid, int m_max, int n_max,
               bool secular_poloidal = true, bool secular_toroidal = true);

  int size() const { return n_secular_ + static_cast<int>(modes_.size()); }
  int secular_count() const { return n_secular_; }
  bool has_secular_poloidal() const { return secular_poloidal_; }
  bool has_secular_toroidal() const { return secular_toroidal_; }
  const std::vector<FourierMode>& modes() const { return modes_; }
  const SurfaceGrid& grid() const { return *grid_; }
  std::shared_ptr<const SurfaceGrid> grid_ptr() const { return grid_; }

  // Basis current evaluated at the nodes of an arbitrary grid over the same
  // surface (the potential is analytic in the parameters).
  void basis_current(int index, const SurfaceGrid& at, std::span<Vec3> out) const;
  std::vector<Vec3> basis_current(int index) const;

  std::vector<Vec3> synthesize(std::span<const double> coeffs) const;
  void synthesize(std::span<const double> coeffs, const SurfaceGrid& at, std::span<Vec3> out) const;

  Matrix mass_matrix() const;

 private:
  std::shared_ptr<const SurfaceGrid> grid_;
  bool secular_poloidal_, secular_toroidal_;
  int n_secular_ = 0;
  std::vector<FourierMode> modes_;
};

// Net loop current carried by a tangent field: the discrete cut integral
// along a grid line. Poloidal current crosses the theta = const toroidal
// loop, toroidal current crosses the phi = const poloidal loop; signs are
// fixed so each secular basis element carries +1 in its own direction.
double net_poloidal_current(const SurfaceGrid& grid, std::span<const Vec3> j, int i_theta = 0);
double net_toroidal_current(const SurfaceGrid& grid, std::span<const Vec3> j, int j_phi = 0);

// sup over a family of spectral test potentials phi of
// |int_S j . grad_S(phi)| / (||j|| ||grad phi||); the weak divergence defect.
double weak_divergence_defect(const SurfaceGrid& grid, std::span<const Vec3> j, int mode_cutoff = 3);

}  // namespace wk

#endif
