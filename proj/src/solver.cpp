#include "emgtrf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "emgtrf/kernels.hpp"

namespace emgtrf::solver {

namespace {

void check_finite(const double* x, std::size_t n, const char* what) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) {
      throw std::invalid_argument(std::string("elastic_net_admm: non-finite value in ") + what);
    }
  }
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(kernels::sumsq(v.data(), v.size()));
}

// Shared ADMM loop; solve_normal applies (2 X^T X + (2 alpha (1-lambda) +
// rho) I)^{-1}, and objective_at evaluates the elastic-net objective.
TRFWeights admm_core(std::size_t n, const std::vector<double>& xty,
                     const std::function<void(const double*, double*)>& solve_normal,
                     const std::function<double(const std::vector<double>&)>& objective_at,
                     const ElasticNetConfig& cfg, WarmStart* warm) {
  std::vector<double> w(n, 0.0), z(n, 0.0), u(n, 0.0);
  if (warm && !warm->w.empty()) {
    if (warm->w.size() != n || warm->z.size() != n || warm->u.size() != n) {
      throw std::invalid_argument("elastic_net_admm: warm start dimension mismatch");
    }
    w = warm->w;
    z = warm->z;
    u = warm->u;
  }

  std::vector<double> rhs(n), z_prev(n), wu(n), diff(n);
  const double shrink = cfg.alpha * cfg.lambda / cfg.rho;

  TRFWeights out;
  std::vector<double> best_z = z;
  double best_residual = std::numeric_limits<double>::infinity();

  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = 2.0 * xty[i] + cfg.rho * (z[i] - u[i]);
    solve_normal(rhs.data(), w.data());

    z_prev = z;
    for (std::size_t i = 0; i < n; ++i) wu[i] = w[i] + u[i];
    kernels::soft_threshold(wu.data(), shrink, z.data(), n);

    for (std::size_t i = 0; i < n; ++i) u[i] += w[i] - z[i];

    for (std::size_t i = 0; i < n; ++i) diff[i] = w[i] - z[i];
    const double primal = norm2(diff);
    for (std::size_t i = 0; i < n; ++i) diff[i] = z[i] - z_prev[i];
    const double dual = cfg.rho * norm2(diff);

    const double residual = std::max(primal, dual);
    if (residual < best_residual) {
      best_residual = residual;
      best_z = z;
    }
    if (residual < cfg.tol) {
      out.converged = true;
      ++it;
      break;
    }
  }

  out.iterations = it;
  out.w = out.converged ? z : best_z;
  out.objective = objective_at(out.w);
  if (warm) {
    warm->w = w;
    warm->z = z;
    warm->u = u;
  }
  return out;
}

}  // namespace

void ElasticNetConfig::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("elastic net: alpha must be >= 0");
  if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
    throw std::invalid_argument("elastic net: lambda must be in [0, 1]");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("elastic net: rho must be > 0");
  if (max_iter < 1) throw std::invalid_argument("elastic net: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("elastic net: tol must be > 0");
}

std::vector<double> soft_threshold(const std::vector<double>& v, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: threshold must be >= 0");
  std::vector<double> out(v.size());
  kernels::soft_threshold(v.data(), t, out.data(), v.size());
  return out;
}

AdmmOperator::AdmmOperator(const Matrix& gram, double alpha, double lambda, double rho) {
  Matrix m = gram;
  for (double& v : m.data) v *= 2.0;
  const double shift = 2.0 * alpha * (1.0 - lambda) + rho;
  factor_ = linalg::CholeskyFactor::factor_shifted(m, shift);
  if (!factor_.ok()) {
    throw std::runtime_error("elastic_net_admm: normal-equation system is not positive definite");
  }
}

double elastic_net_objective(const GramSystem& sys, const std::vector<double>& w, double alpha,
                             double lambda) {
  const std::size_t n = sys.dim();
  std::vector<double> gw(n);
  linalg::symmetric_matvec(sys.gram, w.data(), gw.data());
  const double quad = kernels::dot(w.data(), gw.data(), n);
  const double cross = kernels::dot(w.data(), sys.xty.data(), n);
  const double sse = sys.yty - 2.0 * cross + quad;
  return sse + alpha * ((1.0 - lambda) * kernels::sumsq(w.data(), n) +
                        lambda * kernels::sumabs(w.data(), n));
}

TRFWeights elastic_net_admm(const GramSystem& sys, const AdmmOperator& op,
                            const ElasticNetConfig& cfg, WarmStart* warm) {
  cfg.validate();
  check_finite(sys.gram.data.data(), sys.gram.data.size(), "gram matrix");
  check_finite(sys.xty.data(), sys.xty.size(), "X^T y");
  if (!std::isfinite(sys.yty)) throw std::invalid_argument("elastic_net_admm: non-finite y^T y");
  if (op.factor().dim() != sys.dim()) {
    throw std::invalid_argument("elastic_net_admm: operator dimension mismatch");
  }

  const auto solve_normal = [&](const double* rhs, double* w) { op.factor().solve(rhs, w); };
  const auto objective_at = [&](const std::vector<double>& w) {
    return elastic_net_objective(sys, w, cfg.alpha, cfg.lambda);
  };
  return admm_core(sys.dim(), sys.xty, solve_normal, objective_at, cfg, warm);
}

GramSystem build_gram_system(const design::LaggedDesign& x, const std::vector<double>& y) {
  if (x.frames() != y.size()) {
    throw std::invalid_argument("build_gram_system: rows(X) != len(y)");
  }
  const std::size_t n = x.column_count();
  const std::size_t t = x.frames();
  GramSystem sys;
  sys.gram = Matrix(n, n);
  // Chunk frames so the panel stays cache resident during accumulation.
  const std::size_t chunk = std::max<std::size_t>(8, 16384 / std::max<std::size_t>(n, 1));
  for (std::size_t t0 = 0; t0 < t; t0 += chunk) {
    const std::size_t frames = std::min(chunk, t - t0);
    kernels::gram_accumulate_upper(x.matrix.row(t0), frames, n, sys.gram.data.data());
  }
  kernels::symmetrize_from_upper(sys.gram.data.data(), n);
  sys.xty.assign(n, 0.0);
  kernels::matvec_transposed(x.matrix.data.data(), t, n, y.data(), sys.xty.data());
  sys.yty = kernels::sumsq(y.data(), t);
  return sys;
}

TRFWeights elastic_net_admm(const design::LaggedDesign& x, const std::vector<double>& y,
                            const ElasticNetConfig& cfg) {
  cfg.validate();
  check_finite(x.matrix.data.data(), x.matrix.data.size(), "design matrix");
  check_finite(y.data(), y.size(), "response");
  if (x.frames() != y.size()) {
    throw std::invalid_argument("elastic_net_admm: rows(X) != len(y)");
  }

  const std::size_t n = x.column_count();
  const std::size_t t = x.frames();

  if (t >= n) {
    GramSystem sys = build_gram_system(x, y);
    AdmmOperator op(sys.gram, cfg.alpha, cfg.lambda, cfg.rho);
    return elastic_net_admm(sys, op, cfg, nullptr);
  }

  // Underdetermined case: apply the matrix-inversion identity so the cached
  // factorization is rows x rows. With c = 2 alpha (1 - lambda) + rho,
  //   (c I + 2 X^T X)^{-1} r = (r - X^T (X X^T + (c/2) I)^{-1} X r) / c.
  const double c = 2.0 * cfg.alpha * (1.0 - cfg.lambda) + cfg.rho;
  Matrix xxt(t, t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i; j < t; ++j) {
      xxt(i, j) = kernels::dot(x.matrix.row(i), x.matrix.row(j), n);
    }
  }
  kernels::symmetrize_from_upper(xxt.data.data(), t);
  const auto factor = linalg::CholeskyFactor::factor_shifted(xxt, c / 2.0);
  if (!factor.ok()) {
    throw std::runtime_error("elastic_net_admm: dual system is not positive definite");
  }

  std::vector<double> xty(n, 0.0);
  kernels::matvec_transposed(x.matrix.data.data(), t, n, y.data(), xty.data());

  std::vector<double> xr(t), k_inv_xr(t), back(n);
  const auto solve_normal = [&](const double* rhs, double* w) {
    kernels::matvec(x.matrix.data.data(), t, n, rhs, xr.data());
    factor.solve(xr.data(), k_inv_xr.data());
    kernels::matvec_transposed(x.matrix.data.data(), t, n, k_inv_xr.data(), back.data());
    for (std::size_t i = 0; i < n; ++i) w[i] = (rhs[i] - back[i]) / c;
  };
  std::vector<double> resid(t);
  const auto objective_at = [&](const std::vector<double>& w) {
    kernels::matvec(x.matrix.data.data(), t, n, w.data(), resid.data());
    for (std::size_t i = 0; i < t; ++i) resid[i] = y[i] - resid[i];
    return kernels::sumsq(resid.data(), t) +
           cfg.alpha * ((1.0 - cfg.lambda) * kernels::sumsq(w.data(), n) +
                        cfg.lambda * kernels::sumabs(w.data(), n));
  };
  return admm_core(n, xty, solve_normal, objective_at, cfg, nullptr);
}

std::vector<double> ridge_closed_form(const GramSystem& sys, double alpha_ridge) {
  if (alpha_ridge < 0.0) throw std::invalid_argument("ridge: alpha_ridge must be >= 0");
  const auto factor = linalg::CholeskyFactor::factor_shifted(sys.gram, alpha_ridge);
  if (!factor.ok()) {
    throw std::runtime_error("ridge_closed_form: X^T X + alpha I is singular");
  }
  return factor.solve(sys.xty);
}

std::vector<double> ridge_closed_form(const design::LaggedDesign& x, const std::vector<double>& y,
                                      double alpha_ridge) {
  return ridge_closed_form(build_gram_system(x, y), alpha_ridge);
}

}  // namespace emgtrf::solver
