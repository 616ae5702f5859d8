#include "windingkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "windingkit/parallel.hpp"

namespace wk {

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  parallel_for(rows_, [&](std::size_t i) {
    const double* r = row(i);
    double s = 0;
    for (std::size_t j = 0; j < cols_; j++) s += r[j] * x[j];
    y[i] = s;
  });
  return y;
}

std::vector<double> Matrix::multiply_transposed(std::span<const double> x) const {
  std::vector<double> y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; i++) {
    const double* r = row(i);
    double xi = x[i];
    for (std::size_t j = 0; j < cols_; j++) y[j] += r[j] * xi;
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Cholesky::Cholesky(Matrix a) : l_(std::move(a)) {
  const std::size_t n = l_.rows();
  if (n != l_.cols()) throw std::invalid_argument("Cholesky: matrix not square");
  for (std::size_t k = 0; k < n; k++) {
    double d = l_(k, k);
    for (std::size_t j = 0; j < k; j++) d -= l_(k, j) * l_(k, j);
    if (d <= 0.0 || !std::isfinite(d)) throw std::runtime_error("Cholesky: non-SPD matrix");
    double lkk = std::sqrt(d);
    l_(k, k) = lkk;
    parallel_for(n - k - 1, [&](std::size_t ii) {
      std::size_t i = k + 1 + ii;
      double s = l_(i, k);
      const double* ri = l_.row(i);
      const double* rk = l_.row(k);
      for (std::size_t j = 0; j < k; j++) s -= ri[j] * rk[j];
      l_(i, k) = s / lkk;
    });
  }
}

std::vector<double> Cholesky::solve(std::span<const double> b) const {
  const std::size_t n = l_.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; i++) {
    double s = y[i];
    for (std::size_t j = 0; j < i; j++) s -= l_(i, j) * y[j];
    y[i] = s / l_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < n; j++) s -= l_(j, i) * y[j];
    y[i] = s / l_(i, i);
  }
  return y;
}

std::vector<double> Cholesky::solve_lt(std::span<const double> b) const {
  const std::size_t n = l_.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < n; j++) s -= l_(j, i) * y[j];
    y[i] = s / l_(i, i);
  }
  return y;
}

Lu::Lu(Matrix a) : lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (n != lu_.cols()) throw std::invalid_argument("Lu: matrix not square");
  piv_.resize(n);
  for (std::size_t k = 0; k < n; k++) {
    std::size_t p = k;
    double best = std::fabs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; i++)
      if (std::fabs(lu_(i, k)) > best) { best = std::fabs(lu_(i, k)); p = i; }
    if (best == 0.0) throw std::runtime_error("Lu: singular matrix");
    piv_[k] = static_cast<int>(p);
    if (p != k)
      for (std::size_t j = 0; j < n; j++) std::swap(lu_(k, j), lu_(p, j));
    double pivot = lu_(k, k);
    parallel_for(n - k - 1, [&](std::size_t ii) {
      std::size_t i = k + 1 + ii;
      double f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      double* ri = lu_.row(i);
      const double* rk = lu_.row(k);
      for (std::size_t j = k + 1; j < n; j++) ri[j] -= f * rk[j];
    });
  }
}

std::vector<double> Lu::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t k = 0; k < n; k++) {
    std::swap(y[k], y[piv_[k]]);
    for (std::size_t i = k + 1; i < n; i++) y[i] -= lu_(i, k) * y[k];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < n; j++) s -= lu_(i, j) * y[j];
    y[i] = s / lu_(i, i);
  }
  return y;
}

std::vector<double> Lu::solve_transposed(std::span<const double> b) const {
  // PA = LU  =>  A^T x = b solved as U^T z = b, L^T w = z, x = P^T w
  const std::size_t n = lu_.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; i++) {
    double s = y[i];
    for (std::size_t j = 0; j < i; j++) s -= lu_(j, i) * y[j];
    y[i] = s / lu_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; j++) y[i] -= lu_(j, i) * y[j];
  }
  for (std::size_t k = n; k-- > 0;) std::swap(y[k], y[piv_[k]]);
  return y;
}

SvdResult jacobi_svd(Matrix a, int max_sweeps, double tol) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; i++) v(i, i) = 1.0;

  // column-major copy for cache-friendly column rotations
  std::vector<std::vector<double>> col(n, std::vector<double>(m));
  for (std::size_t i = 0; i < m; i++)
    for (std::size_t j = 0; j < n; j++) col[j][i] = a(i, j);

  for (int sweep = 0; sweep < max_sweeps; sweep++) {
    double off = 0;
    for (std::size_t p = 0; p + 1 < n; p++) {
      for (std::size_t q = p + 1; q < n; q++) {
        double app = dot(col[p], col[p]);
        double aqq = dot(col[q], col[q]);
        double apq = dot(col[p], col[q]);
        if (std::fabs(apq) <= tol * std::sqrt(app * aqq) + 1e-300) continue;
        off = std::max(off, std::fabs(apq) / (std::sqrt(app * aqq) + 1e-300));
        double tau = (aqq - app) / (2 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1 + tau * tau));
        double c = 1.0 / std::sqrt(1 + t * t), s = c * t;
        for (std::size_t i = 0; i < m; i++) {
          double xp = col[p][i], xq = col[q][i];
          col[p][i] = c * xp - s * xq;
          col[q][i] = s * xp + c * xq;
        }
        for (std::size_t i = 0; i < n; i++) {
          double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (off < tol) break;
  }

  std::vector<std::size_t> order(n);
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; j++) {
    sv[j] = norm2(col[j]);
    order[j] = j;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a_, std::size_t b_) { return sv[a_] > sv[b_]; });

  SvdResult r;
  r.singular_values.resize(n);
  r.v = Matrix(n, n);
  for (std::size_t j = 0; j < n; j++) {
    r.singular_values[j] = sv[order[j]];
    for (std::size_t i = 0; i < n; i++) r.v(i, j) = v(i, order[j]);
  }
  return r;
}

double spd_norm_estimate(const std::function<std::vector<double>(std::span<const double>)>& apply,
                         std::size_t n, int iters, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(n);
  for (auto& v : x) v = nd(rng);
  double lam = 0;
  for (int it = 0; it < iters; it++) {
    double nx = norm2(x);
    if (nx == 0) return 0;
    for (auto& v : x) v /= nx;
    auto y = apply(x);
    lam = dot(x, y);
    x = std::move(y);
  }
  return std::fabs(lam);
}

double gmres(const std::function<std::vector<double>(std::span<const double>)>& apply,
             std::span<const double> b, std::vector<double>& x, double tol, int max_iter) {
  const std::size_t n = b.size();
  double bnorm = norm2(b);
  if (bnorm == 0) {
    x.assign(n, 0.0);
    return 0.0;
  }
  x.assign(n, 0.0);
  std::vector<std::vector<double>> basis;  // Arnoldi vectors
  std::vector<std::vector<double>> hcols;  // Hessenberg columns
  std::vector<double> cs, sn, beta;

  basis.push_back(std::vector<double>(b.begin(), b.end()));
  for (auto& v : basis[0]) v /= bnorm;
  beta.assign(1, bnorm);
  double res = 1.0;
  int k = 0;
  for (; k < max_iter; k++) {
    auto w = apply(basis[k]);
    std::vector<double> h(k + 2, 0.0);
    for (int i = 0; i <= k; i++) {
      h[i] = dot(w, basis[i]);
      for (std::size_t j = 0; j < n; j++) w[j] -= h[i] * basis[i][j];
    }
    h[k + 1] = norm2(w);
    if (h[k + 1] > 0)
      for (auto& v : w) v /= h[k + 1];
    // apply accumulated Givens rotations
    for (int i = 0; i < k; i++) {
      double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    double denom = std::hypot(h[k], h[k + 1]);
    double c = denom > 0 ? h[k] / denom : 1.0, s = denom > 0 ? h[k + 1] / denom : 0.0;
    cs.push_back(c);
    sn.push_back(s);
    h[k] = denom;
    h[k + 1] = 0;
    beta.push_back(-s * beta[k]);
    beta[k] = c * beta[k];
    hcols.push_back(std::move(h));
    basis.push_back(std::move(w));
    res = std::fabs(beta[k + 1]) / bnorm;
    if (res < tol) { k++; break; }
  }
  // back-substitute the triangular system
  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; i--) {
    double s = beta[i];
    for (int j = i + 1; j < k; j++) s -= hcols[j][i] * y[j];
    y[i] = s / hcols[i][i];
  }
  for (int i = 0; i < k; i++)
    for (std::size_t j = 0; j < n; j++) x[j] += y[i] * basis[i][j];
  return res;
}

}  // namespace wk
