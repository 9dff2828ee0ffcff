#include "emgtrf/linalg.hpp"

#include <cmath>

#include "emgtrf/kernels.hpp"
#include "emgtrf/rng.hpp"

namespace emgtrf::linalg {

CholeskyFactor CholeskyFactor::factor(const Matrix& a) {
  return factor_shifted(a, 0.0);
}

CholeskyFactor CholeskyFactor::factor_shifted(const Matrix& a, double shift) {
  const std::size_t n = a.rows;
  CholeskyFactor f;
  f.lower_ = Matrix(n, n);
  Matrix& l = f.lower_;

  // Row-wise left-looking Cholesky; the inner sums are dot products over the
  // already-computed row prefixes.
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a.row(i);
    double* lrow = l.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double s = arow[j] - kernels::dot(lrow, l.row(j), j);
      lrow[j] = s / l(j, j);
    }
    const double d = arow[i] + shift - kernels::sumsq(lrow, i);
    if (!(d > 0.0) || !std::isfinite(d)) return f;  // leaves ok_ false
    lrow[i] = std::sqrt(d);
  }

  f.upper_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) f.upper_(j, i) = l(i, j);
  }
  f.ok_ = true;
  return f;
}

void CholeskyFactor::solve(const double* b, double* x) const {
  const std::size_t n = lower_.rows;
  // Forward: L y = b.
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (b[i] - kernels::dot(lower_.row(i), x, i)) / lower_(i, i);
  }
  // Backward: L^T x = y, using the transposed copy for contiguous rows.
  for (std::size_t ii = n; ii-- > 0;) {
    const double* urow = upper_.row(ii);
    x[ii] = (x[ii] - kernels::dot(urow + ii + 1, x + ii + 1, n - ii - 1)) / urow[ii];
  }
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& b) const {
  std::vector<double> x(b.size());
  solve(b.data(), x.data());
  return x;
}

void symmetric_matvec(const Matrix& a, const double* x, double* y) {
  kernels::matvec(a.data.data(), a.rows, a.cols, x, y);
}

double power_iteration_max_eigenvalue(const Matrix& a, int iters, std::uint64_t seed) {
  const std::size_t n = a.rows;
  if (n == 0) return 0.0;
  Rng rng(seed);
  std::vector<double> v(n), av(n);
  for (auto& e : v) e = rng.normal();
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    symmetric_matvec(a, v.data(), av.data());
    const double norm = std::sqrt(kernels::sumsq(av.data(), n));
    if (norm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / norm;
    lambda = norm;
  }
  return lambda;
}

}  // namespace emgtrf::linalg
