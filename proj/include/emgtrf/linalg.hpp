#pragma once

#include <cstddef>
#include <vector>

#include "emgtrf/matrix.hpp"

namespace emgtrf::linalg {

/// Cholesky factorization L L^T of a symmetric positive definite matrix.
/// Keeps both L and L^T row-major so forward and back substitution both walk
/// contiguous memory.
class CholeskyFactor {
 public:
  /// Factors a (full symmetric storage). Returns an invalid factor when the
  /// matrix is not positive definite.
  static CholeskyFactor factor(const Matrix& a);

  /// Factors a + shift*I without modifying a.
  static CholeskyFactor factor_shifted(const Matrix& a, double shift);

  bool ok() const { return ok_; }
  std::size_t dim() const { return lower_.rows; }

  /// Solves L L^T x = b.
  void solve(const double* b, double* x) const;
  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  Matrix lower_;
  Matrix upper_;
  bool ok_ = false;
};

/// y = A x for symmetric A given in full storage.
void symmetric_matvec(const Matrix& a, const double* x, double* y);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration_max_eigenvalue(const Matrix& a, int iters = 200, std::uint64_t seed = 7);

}  // namespace emgtrf::linalg
