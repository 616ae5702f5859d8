#ifndef WINDINGKIT_LINALG_HPP
#define WINDINGKIT_LINALG_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wk {

// Dense row-major matrix. Desk-scale problems only; no external BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double* row(std::size_t i) { return a_.data() + i * cols_; }
  const double* row(std::size_t i) const { return a_.data() + i * cols_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> multiply_transposed(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

// In-place Cholesky factorization A = L L^T of an SPD matrix.
// Throws std::runtime_error on a non-positive pivot.
class Cholesky {
 public:
  explicit Cholesky(Matrix a);
  std::vector<double> solve(std::span<const double> b) const;
  // Solve L^T x = b (for whitening transforms).
  std::vector<double> solve_lt(std::span<const double> b) const;
  const Matrix& factor() const { return l_; }

 private:
  Matrix l_;
};

// LU with partial pivoting for general square systems.
class Lu {
 public:
  explicit Lu(Matrix a);
  std::vector<double> solve(std::span<const double> b) const;
  std::vector<double> solve_transposed(std::span<const double> b) const;

 private:
  Matrix lu_;
  std::vector<int> piv_;
};

// Thin SVD A = U S V^T via one-sided Jacobi; singular values descending.
struct SvdResult {
  std::vector<double> singular_values;  // descending
  Matrix v;                             // cols x cols, right singular vectors (columns)
};
SvdResult jacobi_svd(Matrix a, int max_sweeps = 60, double tol = 1e-13);

// Largest eigenvalue of an SPD operator by power iteration.
double spd_norm_estimate(const std::function<std::vector<double>(std::span<const double>)>& apply,
                         std::size_t n, int iters = 40, unsigned seed = 12345);

// Restarted-free GMRES for well-conditioned square systems (second-kind
// integral equations). Returns the achieved relative residual.
double gmres(const std::function<std::vector<double>(std::span<const double>)>& apply,
             std::span<const double> b, std::vector<double>& x, double tol, int max_iter);

}  // namespace wk

#endif
