#ifndef WINDINGKIT_TIKHONOV_HPP
#define WINDINGKIT_TIKHONOV_HPP

#include <memory>
#include <span>
#include <vector>

#include "windingkit/biot_savart.hpp"
#include "windingkit/linalg.hpp"

namespace wk {

// min_c ||A c - b||^2_W + lambda c^T M c, the discretization of the
// regularized surface-current problem.
struct InverseProblem {
  ForwardMap forward;      // A and the L2(P) probe quadrature
  Matrix mass;             // surface mass matrix M (SPD)
  std::vector<double> b;   // target samples, 3 per probe point

  InverseProblem(ForwardMap fwd, Matrix m, std::vector<double> target);

  const Matrix& a() const { return forward.a; }
  // W diagonal entry of a row (probe quadrature weight; satellites are 0).
  double row_weight(std::size_t row) const { return forward.probes.weights[row / 3]; }

  // cached normal-equations data
  const Matrix& normal_matrix() const { return nmat_; }
  const std::vector<double>& normal_rhs() const { return nrhs_; }
  double normal_scale() const { return nscale_; }  // ||A^T W A||_2 estimate
  double mass_scale() const { return mscale_; }    // ||M||_2 estimate
  double target_norm_sq() const { return bnorm_sq_; }

  // M = L L^T whitening data: the solve runs on L^-1 (A^T W A) L^-T + lambda I,
  // which keeps kappa(M) out of the conditioning of small-lambda systems.
  const Cholesky& mass_cholesky() const { return *mass_chol_; }
  const Matrix& whitened_normal() const { return nwhite_; }
  const std::vector<double>& whitened_rhs() const { return nrhs_white_; }

 private:
  Matrix nmat_, nwhite_;
  std::vector<double> nrhs_, nrhs_white_;
  std::shared_ptr<Cholesky> mass_chol_;
  double nscale_ = 0, mscale_ = 0, bnorm_sq_ = 0;
};

struct SweepRecord {
  double lambda = 0;
  double objective = 0;        // C(lambda) = residual_sq + lambda * current_norm_sq
  double residual_sq = 0;      // ||BS(j) - B_T||^2_{L2(P)}
  double current_norm_sq = 0;  // ||j||^2_{L2(S)}
  double bound_ratio = 0;      // lambda * current_norm_sq / objective, <= 1
  double c0_error = 0;
  double c1_error = 0;
  double optimality_residual = 0;  // ||A^T W (A c - b) + lambda M c|| / ||A^T W b||
  double condition_estimate = 0;   // kappa_2 of (A^T W A + lambda M)
};

struct SolveResult {
  std::vector<double> coefficients;
  SweepRecord record;
};

// Solve the normal equations (A^T W A + lambda M) c = A^T W b by Cholesky
// with iterative refinement. Throws std::invalid_argument for lambda <= 0.
SolveResult solve_lambda(const InverseProblem& problem, double lambda);

struct SweepResult {
  std::vector<SweepRecord> records;      // in grid order (descending lambda)
  bool objective_monotone = true;        // C nondecreasing in lambda
  bool current_norm_monotone = true;     // ||j|| nonincreasing in lambda
};

// Descending, strictly positive lambda grid.
SweepResult sweep(const InverseProblem& problem, std::span<const double> lambda_grid);

// Default grid: `count` points log-spaced on [lo_rel, hi_rel] scaled by
// ||A^T W A|| / ||M||, descending.
std::vector<double> default_lambda_grid(const InverseProblem& problem, int count = 24,
                                        double lo_rel = 1e-10, double hi_rel = 1e2);

}  // namespace wk

#endif
