#include "hrgraph/sparse_solvers.hpp"

#include <cmath>
#include <string>

#include "hrgraph/errors.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

Vector drop_entry(const Vector& v, int idx) {
  Vector out(v.size() - 1);
  for (Eigen::Index i = 0, o = 0; i < v.size(); ++i) {
    if (i != idx) out(o++) = v(i);
  }
  return out;
}

void require_square_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError(Reason::not_square, "solver input must be square");
  if (!a.allFinite()) throw ValidationError(Reason::not_finite, "solver input has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ValidationError(Reason::asymmetric, "solver input must be symmetric");
  }
}

}  // namespace

double quadratic_lasso_objective(const Matrix& c, const Vector& b, double rho, const Vector& theta) {
  return -2.0 * b.dot(theta) + theta.dot(c * theta) + rho * theta.lpNorm<1>();
}

LassoSolution solve_quadratic_lasso(const Matrix& c, const Vector& b, double rho, Vector theta,
                                    const SolverOptions& opts) {
  const Eigen::Index p = b.size();
  if (rho < 0.0) throw ValidationError(Reason::bad_argument, "penalty must be non-negative");
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(c(j, j) > 0.0)) {
      throw ValidationError(Reason::bad_argument, "lasso requires a positive diagonal");
    }
  }
  if (theta.size() != p) theta = Vector::Zero(p);

  LassoSolution sol;
  Vector grad = c * theta;  // C theta
  const double half_rho = 0.5 * rho;
  // Changes are measured as sqrt(C_jj)|delta_j| relative to the largest
  // univariate solution, so the rule does not depend on the scale of C.
  const Vector root_diag = c.diagonal().cwiseSqrt();
  const double scale = std::max((b.array().abs() / root_diag.array()).maxCoeff(), 1e-300);
  const double threshold = opts.tol * scale;
  if (opts.record_trace) sol.objective_trace.push_back(quadratic_lasso_objective(c, b, rho, theta));
  for (int sweep = 1; sweep <= opts.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double old = theta(j);
      const double partial = b(j) - (grad(j) - c(j, j) * old);
      const double updated = soft_threshold(partial, half_rho) / c(j, j);
      const double delta = updated - old;
      if (delta != 0.0) {
        theta(j) = updated;
        grad.noalias() += c.col(j) * delta;
        max_change = std::max(max_change, root_diag(j) * std::abs(delta));
      }
    }
    sol.iterations = sweep;
    if (opts.record_trace) sol.objective_trace.push_back(quadratic_lasso_objective(c, b, rho, theta));
    if (max_change <= threshold) {
      sol.converged = true;
      break;
    }
  }
  sol.objective = quadratic_lasso_objective(c, b, rho, theta);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (std::abs(theta(j)) > opts.zero_tol) sol.active_set.push_back(static_cast<int>(j));
  }
  sol.theta = std::move(theta);
  return sol;
}

LassoSolution lasso_quadratic(const Matrix& a, int ell, double rho, const SolverOptions& opts) {
  require_square_symmetric(a);
  const int p = static_cast<int>(a.rows());
  if (p < 2) throw ValidationError(Reason::too_small, "lasso needs at least 2 variables");
  if (ell < 0 || ell >= p) throw ValidationError(Reason::bad_argument, "regression index out of range");
  const Matrix c = drop_index(a, ell);
  const Vector b = drop_entry(a.col(ell), ell);
  return solve_quadratic_lasso(c, b, rho, Vector::Zero(p - 1), opts);
}

SparsityPattern neighborhood_selection(const Matrix& a, const Vector& rho, const SolverOptions& opts) {
  require_square_symmetric(a);
  const int p = static_cast<int>(a.rows());
  if (rho.size() != p) throw ValidationError(Reason::dimension_mismatch, "need one penalty per variable");
  SparsityPattern votes = SparsityPattern::Zero(p, p);
  if (p < 2) return votes;
  for (int ell = 0; ell < p; ++ell) {
    const auto sol = lasso_quadratic(a, ell, rho(ell), opts);
    if (!sol.converged) {
      throw ConvergenceError("lasso for variable " + std::to_string(ell + 1) + " did not converge in " +
                             std::to_string(opts.max_iter) + " sweeps");
    }
    for (int idx : sol.active_set) {
      const int j = idx < ell ? idx : idx + 1;
      votes(ell, j) = 1;  // j in ne(ell)
    }
  }
  SparsityPattern z = SparsityPattern::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const bool on = opts.and_rule ? (votes(i, j) && votes(j, i)) : (votes(i, j) || votes(j, i));
      z(i, j) = z(j, i) = on ? 1 : 0;
    }
  }
  return z;
}

double glasso_objective(const Matrix& a, double rho, const Matrix& q) {
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double off_l1 = q.cwiseAbs().sum() - q.diagonal().cwiseAbs().sum();
  return -logdet + (a.cwiseProduct(q)).sum() + rho * off_l1;
}

double glasso_kkt_residual(const Matrix& a, double rho, const Matrix& q, double zero_tol) {
  const Eigen::Index p = q.rows();
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Matrix w = llt.solve(Matrix::Identity(p, p));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    worst = std::max(worst, std::abs(a(i, i) - w(i, i)));
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j) continue;
      const double g = a(i, j) - w(i, j);
      if (std::abs(q(i, j)) > zero_tol) {
        worst = std::max(worst, std::abs(g + rho * (q(i, j) > 0 ? 1.0 : -1.0)));
      } else {
        worst = std::max(worst, std::abs(g) - rho);
      }
    }
  }
  return worst;
}

GlassoSolution graphical_lasso(const Matrix& a, double rho, const SolverOptions& opts) {
  require_square_symmetric(a);
  if (rho < 0.0) throw ValidationError(Reason::bad_argument, "penalty must be non-negative");
  const int p = static_cast<int>(a.rows());
  for (int i = 0; i < p; ++i) {
    if (!(a(i, i) > 0.0)) throw ValidationError(Reason::bad_argument, "graphical lasso requires a positive diagonal");
  }

  GlassoSolution sol;
  if (p == 1) {
    sol.precision = Matrix::Constant(1, 1, 1.0 / a(0, 0));
    sol.covariance = a;
    sol.objective = glasso_objective(a, rho, sol.precision);
    return sol;
  }

  // Diagonal of W stays at A_ii since the diagonal of Q is not penalized.
  Matrix w = a;
  Matrix betas = Matrix::Zero(p - 1, p);
  const double outer_threshold = opts.outer_tol * a.diagonal().maxCoeff();
  bool converged = false;
  for (int outer = 1; outer <= opts.max_outer_iter; ++outer) {
    double max_change = 0.0;
    for (int j = 0; j < p; ++j) {
      const Matrix w11 = drop_index(w, j);
      const Vector s12 = drop_entry(a.col(j), j);
      auto inner = solve_quadratic_lasso(w11, s12, 2.0 * rho, betas.col(j), opts);
      if (!inner.converged) {
        throw ConvergenceError("graphical lasso inner problem for column " + std::to_string(j + 1) +
                               " did not converge");
      }
      betas.col(j) = inner.theta;
      const Vector w12 = w11 * inner.theta;
      for (int i = 0, o = 0; i < p; ++i) {
        if (i == j) continue;
        max_change = std::max(max_change, std::abs(w(i, j) - w12(o)));
        w(i, j) = w12(o);
        w(j, i) = w12(o);
        ++o;
      }
    }
    sol.iterations = outer;
    if (max_change <= outer_threshold) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("graphical lasso did not converge in " + std::to_string(opts.max_outer_iter) +
                           " outer sweeps");
  }

  Matrix q = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    const Vector beta = betas.col(j);
    const Vector w12 = drop_entry(w.col(j), j);
    const double qjj = 1.0 / (w(j, j) - w12.dot(beta));
    q(j, j) = qjj;
    for (int i = 0, o = 0; i < p; ++i) {
      if (i == j) continue;
      q(i, j) = -beta(o++) * qjj;
    }
  }
  q = 0.5 * (q + q.transpose().eval());
  if (Eigen::LLT<Matrix>(q).info() != Eigen::Success) {
    throw ValidationError(Reason::rank_deficient, "graphical lasso estimate lost positive definiteness");
  }
  sol.precision = std::move(q);
  sol.covariance = std::move(w);
  sol.objective = glasso_objective(a, rho, sol.precision);
  return sol;
}

SparsityPattern glasso_pattern(const Matrix& a, double rho, const SolverOptions& opts) {
  const auto sol = graphical_lasso(a, rho, opts);
  const Eigen::Index p = a.rows();
  SparsityPattern z = SparsityPattern::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      z(i, j) = z(j, i) = std::abs(sol.precision(i, j)) > opts.zero_tol ? 1 : 0;
    }
  }
  return z;
}

}  // namespace hrgraph
