#pragma once

// Hüsler-Reiss parametrizations: the variogram matrix Gamma, the rooted
// Farris covariances Sigma^(m) and precisions Theta^(m), and the
// pseudo-inverse precision Theta, together with the maps between them.
//
// Node indices are 0-based throughout the library.

#include <Eigen/Dense>

#include "hrgraph/graph.hpp"

namespace hrgraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kCndTolerance = 1e-10;
// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-10;
// Relative tolerance used by graph_from_precision when none is given.
inline constexpr double kPrecisionZeroTolerance = 1e-9;

// A validated member of the cone of strictly conditionally negative definite
// matrices: symmetric, zero diagonal, positive off-diagonal.
class VariogramMatrix {
 public:
  const Matrix& matrix() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  friend VariogramMatrix validate_variogram(const Matrix& candidate, double tol);
  explicit VariogramMatrix(Matrix entries) : entries_(std::move(entries)) {}

  Matrix entries_;
};

// Sigma^(m) = phi_m(Gamma). Row and column `root` are zero.
struct FarrisCovariance {
  int root = 0;
  Matrix entries;

  // Submatrix with row/column `root` removed, of size (d-1)x(d-1).
  Matrix reduced() const;
};

// Theta^(m): inverse of the reduced Farris covariance, padded with a zero
// row and column at `root`.
struct RootedPrecision {
  int root = 0;
  Matrix entries;

  Matrix reduced() const;
};

// Theta = (P(-Gamma/2)P)^+; symmetric PSD of rank d-1 with zero row sums.
class HRPrecision {
 public:
  // Checks symmetry, zero row sums and rank d-1 (relative tolerance `tol`).
  static HRPrecision from_matrix(const Matrix& theta, double tol = 1e-8);

  const Matrix& matrix() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  friend HRPrecision precision_from_gamma(const VariogramMatrix& gamma);
  explicit HRPrecision(Matrix entries) : entries_(std::move(entries)) {}

  Matrix entries_;
};

// Throws ValidationError with a distinct reason for asymmetry, nonzero
// diagonal, non-positive off-diagonal entries and failure of strict
// conditional negative definiteness (smallest eigenvalue of -Gamma/2 on the
// orthogonal complement of 1 below `tol`).
VariogramMatrix validate_variogram(const Matrix& candidate, double tol = kCndTolerance);

// Orthonormal basis of the complement of the all-ones vector (Helmert
// contrasts), as a d x (d-1) matrix.
Matrix ones_complement_basis(int d);

// Centering projection P = I - 11^T/d.
Matrix centering_matrix(int d);

// Entry (i,j) = (G_im + G_jm - G_ij)/2. Accepts any square matrix so it can
// be applied to empirical variograms.
Matrix farris_matrix(const Matrix& gamma, int root);
FarrisCovariance farris_transform(const VariogramMatrix& gamma, int root);

// Gamma = 1 diag(S)^T + diag(S) 1^T - 2S. Not validated.
Matrix inverse_farris(const Matrix& sigma);

RootedPrecision rooted_precision(const VariogramMatrix& gamma, int root);
HRPrecision precision_from_gamma(const VariogramMatrix& gamma);
VariogramMatrix gamma_from_precision(const HRPrecision& theta);

// Edge {i,j} iff |Theta_ij| > tol. A negative tol selects the default
// kPrecisionZeroTolerance * max|Theta|.
Graph graph_from_precision(const HRPrecision& theta, double tol = -1.0);
Graph graph_from_precision(const Matrix& theta, double tol = -1.0);

// Helpers for removing/reinserting one index of a square matrix.
Matrix drop_index(const Matrix& m, int idx);
Matrix insert_zero_index(const Matrix& m, int idx);

// Moore-Penrose pseudo-inverse of a symmetric matrix; eigenvalues below
// rel_tol * max|eigenvalue| are zeroed. `rank` receives the retained count.
Matrix symmetric_pinv(const Matrix& a, double rel_tol, int* rank = nullptr);

double normal_cdf(double x);
double normal_pdf(double x);

// Closed forms for a bivariate Hüsler-Reiss pair with variogram value
// gamma_ij > 0. With lambda = sqrt(gamma_ij)/2:
//   L(x,y) = x Phi(lambda + log(x/y)/(2 lambda)) + y Phi(lambda + log(y/x)/(2 lambda)),
//   R(x,y) = x + y - L(x,y),
// and r is the mixed partial derivative of R.
class HrBivariate {
 public:
  explicit HrBivariate(double gamma_ij);

  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }

  double stable_tail(double x, double y) const;
  // R(x, y)
  double tail_function(double x, double y) const;
  // r(x, y) = d^2 R / dx dy
  double density(double x, double y) const;
  // L(1,1), the bivariate extremal coefficient.
  double extremal_coefficient() const { return stable_tail(1.0, 1.0); }

 private:
  double gamma_;
  double lambda_;
};

}  // namespace hrgraph
