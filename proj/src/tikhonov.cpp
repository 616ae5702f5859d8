#include "windingkit/tikhonov.hpp"

#include <cmath>
#include <stdexcept>

namespace wk {

InverseProblem::InverseProblem(ForwardMap fwd, Matrix m, std::vector<double> target)
    : forward(std::move(fwd)), mass(std::move(m)), b(std::move(target)) {
  const Matrix& a = forward.a;
  if (b.size() != a.rows()) throw std::invalid_argument("InverseProblem: target size mismatch");
  if (mass.rows() != a.cols() || mass.cols() != a.cols())
    throw std::invalid_argument("InverseProblem: mass matrix size mismatch");

  const std::size_t nb = a.cols();
  nmat_ = Matrix(nb, nb);
  nrhs_.assign(nb, 0.0);
  for (std::size_t r = 0; r < a.rows(); r++) {
    double w = row_weight(r);
    if (w == 0.0) continue;
    const double* row = a.row(r);
    for (std::size_t i = 0; i < nb; i++) {
      double wi = w * row[i];
      nrhs_[i] += wi * b[r];
      for (std::size_t j = i; j < nb; j++) nmat_(i, j) += wi * row[j];
    }
    bnorm_sq_ += w * b[r] * b[r];
  }
  for (std::size_t i = 0; i < nb; i++)
    for (std::size_t j = 0; j < i; j++) nmat_(i, j) = nmat_(j, i);

  nscale_ = spd_norm_estimate([&](std::span<const double> x) { return nmat_.multiply(x); }, nb);
  mscale_ = spd_norm_estimate([&](std::span<const double> x) { return mass.multiply(x); }, nb);

  // whitening: N_w = L^-1 N L^-T where M = L L^T, via forward solves
  mass_chol_ = std::make_shared<Cholesky>(mass);
  const Matrix& l = mass_chol_->factor();
  auto forward_solve = [&](std::vector<double>& y) {
    for (std::size_t i = 0; i < nb; i++) {
      double acc = y[i];
      for (std::size_t j = 0; j < i; j++) acc -= l(i, j) * y[j];
      y[i] = acc / l(i, i);
    }
  };
  Matrix half(nb, nb);  // L^-1 N (column by column of N, then transpose trick)
  for (std::size_t c = 0; c < nb; c++) {
    std::vector<double> col(nb);
    for (std::size_t r = 0; r < nb; r++) col[r] = nmat_(r, c);
    forward_solve(col);
    for (std::size_t r = 0; r < nb; r++) half(r, c) = col[r];
  }
  nwhite_ = Matrix(nb, nb);
  for (std::size_t r = 0; r < nb; r++) {
    std::vector<double> row(nb);
    for (std::size_t c = 0; c < nb; c++) row[c] = half(r, c);
    forward_solve(row);  // (L^-1 (L^-1 N)^T)^T rows
    for (std::size_t c = 0; c < nb; c++) nwhite_(r, c) = row[c];
  }
  // symmetrize away roundoff
  for (std::size_t r = 0; r < nb; r++)
    for (std::size_t c = r + 1; c < nb; c++) {
      double v = 0.5 * (nwhite_(r, c) + nwhite_(c, r));
      nwhite_(r, c) = v;
      nwhite_(c, r) = v;
    }
  nrhs_white_ = nrhs_;
  forward_solve(nrhs_white_);
}

namespace {

std::vector<double> regularized_multiply(const InverseProblem& p, double lambda,
                                         std::span<const double> c) {
  auto y = p.normal_matrix().multiply(c);
  auto my = p.mass.multiply(c);
  for (std::size_t i = 0; i < y.size(); i++) y[i] += lambda * my[i];
  return y;
}

}  // namespace

SolveResult solve_lambda(const InverseProblem& problem, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("solve_lambda: lambda must be positive");
  const std::size_t nb = problem.a().cols();

  // whitened system (N_w + lambda I) y = rhs_w, then c = L^-T y
  Matrix sys(nb, nb);
  for (std::size_t i = 0; i < nb; i++)
    for (std::size_t j = 0; j < nb; j++)
      sys(i, j) = problem.whitened_normal()(i, j) + (i == j ? lambda : 0.0);

  Cholesky chol(std::move(sys));
  const auto& rhs_w = problem.whitened_rhs();
  auto y = chol.solve(rhs_w);

  double rhs_w_norm = norm2(rhs_w);
  for (int step = 0; step < 30; step++) {
    auto r = problem.whitened_normal().multiply(y);
    for (std::size_t i = 0; i < nb; i++) r[i] = rhs_w[i] - r[i] - lambda * y[i];
    if (norm2(r) <= 1e-13 * (rhs_w_norm > 0 ? rhs_w_norm : 1.0)) break;
    auto dy = chol.solve(r);
    for (std::size_t i = 0; i < nb; i++) y[i] += dy[i];
  }
  auto c = problem.mass_cholesky().solve_lt(y);

  // first-order optimality in the original variables
  const auto& rhs = problem.normal_rhs();
  double rhs_norm = norm2(rhs);
  auto res = regularized_multiply(problem, lambda, c);
  for (std::size_t i = 0; i < nb; i++) res[i] = rhs[i] - res[i];
  double opt = norm2(res) / (rhs_norm > 0 ? rhs_norm : 1.0);

  SolveResult out;
  out.record.lambda = lambda;
  out.record.optimality_residual = opt;

  // residual and norms
  auto ac = problem.a().multiply(c);
  double resid = 0;
  for (std::size_t r = 0; r < ac.size(); r++) {
    double w = problem.row_weight(r);
    double e = ac[r] - problem.b[r];
    resid += w * e * e;
  }
  auto mc = problem.mass.multiply(c);
  double cn = dot(c, mc);
  out.record.residual_sq = resid;
  out.record.current_norm_sq = cn;
  out.record.objective = resid + lambda * cn;
  out.record.bound_ratio = out.record.objective > 0 ? lambda * cn / out.record.objective : 0.0;

  // field-space metrics against the stored target
  std::vector<Vec3> field(ac.size() / 3), target(ac.size() / 3);
  for (std::size_t p = 0; p < field.size(); p++) {
    field[p] = {ac[3 * p], ac[3 * p + 1], ac[3 * p + 2]};
    target[p] = {problem.b[3 * p], problem.b[3 * p + 1], problem.b[3 * p + 2]};
  }
  FieldMetrics fmx = field_metrics(field, target, problem.forward.probes);
  out.record.c0_error = fmx.c0_error;
  out.record.c1_error = fmx.c1_error;

  // condition of the system actually solved (the whitened one)
  double lo = 1.0 / spd_norm_estimate(
                        [&](std::span<const double> x) { return chol.solve(x); }, nb, 30);
  double hi = spd_norm_estimate(
      [&](std::span<const double> x) {
        auto v = problem.whitened_normal().multiply(x);
        for (std::size_t i = 0; i < x.size(); i++) v[i] += lambda * x[i];
        return v;
      },
      nb, 30);
  out.record.condition_estimate = lo > 0 ? hi / lo : 0.0;

  out.coefficients = std::move(c);
  return out;
}

SweepResult sweep(const InverseProblem& problem, std::span<const double> lambda_grid) {
  for (std::size_t i = 0; i < lambda_grid.size(); i++) {
    if (!(lambda_grid[i] > 0)) throw std::invalid_argument("sweep: lambda grid must be positive");
    if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1]))
      throw std::invalid_argument("sweep: lambda grid must be strictly descending");
  }
  SweepResult out;
  out.records.reserve(lambda_grid.size());
  for (double lam : lambda_grid) out.records.push_back(solve_lambda(problem, lam).record);

  for (std::size_t i = 1; i < out.records.size(); i++) {
    const auto& hi = out.records[i - 1];  // larger lambda
    const auto& lo = out.records[i];
    double scale = std::max(std::fabs(hi.objective), std::fabs(lo.objective));
    if (lo.objective > hi.objective + 1e-12 * scale) out.objective_monotone = false;
    double cscale = std::max(hi.current_norm_sq, lo.current_norm_sq);
    if (hi.current_norm_sq > lo.current_norm_sq + 1e-12 * cscale) out.current_norm_monotone = false;
  }
  return out;
}

std::vector<double> default_lambda_grid(const InverseProblem& problem, int count, double lo_rel,
                                        double hi_rel) {
  double scale = problem.mass_scale() > 0 ? problem.normal_scale() / problem.mass_scale() : 1.0;
  std::vector<double> grid(count);
  for (int i = 0; i < count; i++) {
    double t = count > 1 ? double(i) / (count - 1) : 0.0;
    grid[i] = scale * hi_rel * std::pow(lo_rel / hi_rel, t);
  }
  return grid;  // descending
}

}  // namespace wk
