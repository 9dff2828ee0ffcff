#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "emgtrf/design.hpp"
#include "emgtrf/linalg.hpp"
#include "emgtrf/matrix.hpp"

namespace emgtrf::solver {

/// Elastic-net settings. The objective is
///   ||y - X w||^2 + alpha * [(1 - lambda) ||w||^2 + lambda ||w||_1]
/// with no extra normalization, so alpha values are tied to this scaling.
struct ElasticNetConfig {
  double alpha = 1e-2;
  double lambda = 0.1;  // L1 ratio in [0, 1]
  double rho = 0.1;     // ADMM penalty
  int max_iter = 10000;
  double tol = 1e-9;

  void validate() const;
};

/// Fitted weights for one response channel. `w` is the sparse ADMM iterate,
/// so exact zeros survive.
struct TRFWeights {
  std::vector<double> w;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
};

/// ADMM iterate triple used to warm-start the next grid point.
struct WarmStart {
  std::vector<double> w;
  std::vector<double> z;
  std::vector<double> u;
};

std::vector<double> soft_threshold(const std::vector<double>& v, double t);

/// Normal-equation statistics of a regression problem: gram = X^T X (full
/// symmetric storage), xty = X^T y, yty = y^T y. Additive over row blocks,
/// which is what lets cross-validation folds share per-trial pieces.
struct GramSystem {
  Matrix gram;
  std::vector<double> xty;
  double yty = 0.0;

  std::size_t dim() const { return gram.rows; }
};

/// Factorization of (2 X^T X + (2 alpha (1-lambda) + rho) I), reusable across
/// channels that share a design.
class AdmmOperator {
 public:
  AdmmOperator(const Matrix& gram, double alpha, double lambda, double rho);
  const linalg::CholeskyFactor& factor() const { return factor_; }

 private:
  linalg::CholeskyFactor factor_;
};

/// ADMM on the normal equations. Stops when
/// max(||w - z||_2, rho ||z - z_prev||_2) < tol.
TRFWeights elastic_net_admm(const GramSystem& sys, const AdmmOperator& op,
                            const ElasticNetConfig& cfg, WarmStart* warm = nullptr);

/// Convenience single-shot entry on an explicit design matrix. Picks the
/// primal (columns x columns) system when rows >= columns and the dual
/// (rows x rows) system otherwise.
TRFWeights elastic_net_admm(const design::LaggedDesign& x, const std::vector<double>& y,
                            const ElasticNetConfig& cfg);

/// Exact minimizer of ||y - X w||^2 + alpha_ridge ||w||^2 by direct solve of
/// (X^T X + alpha_ridge I) w = X^T y. Throws when the system is singular.
std::vector<double> ridge_closed_form(const design::LaggedDesign& x, const std::vector<double>& y,
                                      double alpha_ridge);
std::vector<double> ridge_closed_form(const GramSystem& sys, double alpha_ridge);

/// Eq-style objective value at w for a given system.
double elastic_net_objective(const GramSystem& sys, const std::vector<double>& w, double alpha,
                             double lambda);

/// Builds the normal-equation statistics from an explicit design.
GramSystem build_gram_system(const design::LaggedDesign& x, const std::vector<double>& y);

}  // namespace emgtrf::solver
