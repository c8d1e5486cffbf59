#pragma once

// L1-penalized solvers on a symmetric input matrix A:
//  - the quadratic lasso  min_theta -2 A_{l,-l} theta + theta' A_{-l,-l} theta + rho |theta|_1
//  - neighborhood selection (one lasso per variable, OR-combined supports)
//  - the graphical lasso  min_Q -log det Q + tr(A Q) + rho sum_{i != j} |Q_ij|

#include <vector>

#include <Eigen/Dense>

#include "hrgraph/hr_model.hpp"

namespace hrgraph {

struct SolverOptions {
  double tol = 1e-8;          // max sqrt(C_jj)|change| per sweep, relative to max |b_j|/sqrt(C_jj)
  int max_iter = 100000;      // sweeps
  double zero_tol = 1e-6;     // support extraction threshold, above the stopping slack
  double outer_tol = 1e-7;    // graphical lasso: max change of W relative to max A_ii
  int max_outer_iter = 1000;  // graphical lasso outer sweeps
  bool and_rule = false;      // neighborhood selection: AND instead of OR
  bool record_trace = false;  // keep the objective after every sweep
};

struct LassoSolution {
  Vector theta;                 // length p-1, indexed over the variables other than ell
  std::vector<int> active_set;  // indices into theta with nonzero entries
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

// Coordinate descent on min -2 b'theta + theta' C theta + rho |theta|_1.
// `theta` is the warm start on entry and the solution on exit.
LassoSolution solve_quadratic_lasso(const Matrix& c, const Vector& b, double rho, Vector theta,
                                    const SolverOptions& opts = {});

// Objective of the quadratic lasso at theta.
double quadratic_lasso_objective(const Matrix& c, const Vector& b, double rho, const Vector& theta);

// Lasso regression of variable `ell` on the others. Does not throw on
// non-convergence; check `converged`.
LassoSolution lasso_quadratic(const Matrix& a, int ell, double rho, const SolverOptions& opts = {});

// Symmetric 0/1 pattern with zero diagonal.
using SparsityPattern = Eigen::MatrixXi;

// One lasso per variable with penalty rho[ell]; Z_ij = 1 iff i in ne(j) or
// j in ne(i). Throws ConvergenceError if any lasso fails to converge.
SparsityPattern neighborhood_selection(const Matrix& a, const Vector& rho, const SolverOptions& opts = {});

struct GlassoSolution {
  Matrix precision;   // Q
  Matrix covariance;  // working covariance W, the estimate of Q^{-1}
  double objective = 0.0;
  int iterations = 0;
};

// Block coordinate descent on the dual (one row/column at a time). Throws
// ConvergenceError when the outer loop does not settle and ValidationError
// for a non-positive diagonal or a non-positive-definite result.
GlassoSolution graphical_lasso(const Matrix& a, double rho, const SolverOptions& opts = {});

double glasso_objective(const Matrix& a, double rho, const Matrix& q);

// Largest KKT violation of a candidate Q: off-diagonal |-(Q^-1)_ij + A_ij + rho sign(Q_ij)|
// for nonzero Q_ij, (|-(Q^-1)_ij + A_ij| - rho)_+ for zero Q_ij, and
// |-(Q^-1)_ii + A_ii| on the diagonal.
double glasso_kkt_residual(const Matrix& a, double rho, const Matrix& q, double zero_tol = 1e-9);

SparsityPattern glasso_pattern(const Matrix& a, double rho, const SolverOptions& opts = {});

}  // namespace hrgraph
