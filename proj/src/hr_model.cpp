#include "hrgraph/hr_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "hrgraph/errors.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ValidationError(Reason::not_square, std::string(what) + " must be square");
  }
}

void require_root(int d, int root) {
  if (root < 0 || root >= d) {
    throw ValidationError(Reason::bad_argument,
                          "root " + std::to_string(root) + " out of range for dimension " + std::to_string(d));
  }
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Matrix FarrisCovariance::reduced() const { return drop_index(entries, root); }
Matrix RootedPrecision::reduced() const { return drop_index(entries, root); }

Matrix drop_index(const Matrix& m, int idx) {
  const Eigen::Index d = m.rows();
  Matrix out(d - 1, d - 1);
  for (Eigen::Index i = 0, oi = 0; i < d; ++i) {
    if (i == idx) continue;
    for (Eigen::Index j = 0, oj = 0; j < d; ++j) {
      if (j == idx) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

Matrix insert_zero_index(const Matrix& m, int idx) {
  const Eigen::Index d = m.rows() + 1;
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index i = 0, oi = 0; i < d; ++i) {
    if (i == idx) continue;
    for (Eigen::Index j = 0, oj = 0; j < d; ++j) {
      if (j == idx) continue;
      out(i, j) = m(oi, oj++);
    }
    ++oi;
  }
  return out;
}

Matrix ones_complement_basis(int d) {
  Matrix u = Matrix::Zero(d, d - 1);
  for (int k = 1; k < d; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) u(i, k - 1) = scale;
    u(k, k - 1) = -k * scale;
  }
  return u;
}

Matrix centering_matrix(int d) {
  return Matrix::Identity(d, d) - Matrix::Constant(d, d, 1.0 / d);
}

VariogramMatrix validate_variogram(const Matrix& candidate, double tol) {
  require_square(candidate, "variogram");
  const int d = static_cast<int>(candidate.rows());
  if (d < 2) throw ValidationError(Reason::too_small, "variogram dimension must be at least 2");
  if (!candidate.allFinite()) throw ValidationError(Reason::not_finite, "variogram has non-finite entries");

  const double scale = std::max(1.0, candidate.cwiseAbs().maxCoeff());
  const double exact_tol = 1e-12 * scale;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (std::abs(candidate(i, j) - candidate(j, i)) > exact_tol) {
        throw ValidationError(Reason::asymmetric, "variogram is not symmetric at (" + std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + ")");
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    if (std::abs(candidate(i, i)) > exact_tol) {
      throw ValidationError(Reason::nonzero_diagonal,
                            "variogram has nonzero diagonal entry at " + std::to_string(i + 1));
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (!(candidate(i, j) > 0.0)) {
        throw ValidationError(Reason::nonpositive_offdiagonal, "variogram entry (" + std::to_string(i + 1) + "," +
                                                                   std::to_string(j + 1) + ") is not positive");
      }
    }
  }

  Matrix sym = symmetrize(candidate);
  sym.diagonal().setZero();
  const Matrix u = ones_complement_basis(d);
  const Matrix restricted = u.transpose() * (-0.5 * sym) * u;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(restricted, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest >= tol)) {
    throw ValidationError(Reason::not_conditionally_negative_definite,
                          "variogram is not strictly conditionally negative definite (smallest eigenvalue " +
                              std::to_string(smallest) + ")");
  }
  return VariogramMatrix(std::move(sym));
}

Matrix farris_matrix(const Matrix& gamma, int root) {
  require_square(gamma, "variogram");
  const int d = static_cast<int>(gamma.rows());
  require_root(d, root);
  Matrix sigma(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      sigma(i, j) = 0.5 * (gamma(i, root) + gamma(j, root) - gamma(i, j));
    }
  }
  sigma.row(root).setZero();
  sigma.col(root).setZero();
  return sigma;
}

FarrisCovariance farris_transform(const VariogramMatrix& gamma, int root) {
  return FarrisCovariance{root, farris_matrix(gamma.matrix(), root)};
}

Matrix inverse_farris(const Matrix& sigma) {
  require_square(sigma, "covariance");
  const Eigen::Index d = sigma.rows();
  const Vector diag = sigma.diagonal();
  return diag.transpose().replicate(d, 1) + diag.replicate(1, d) - 2.0 * sigma;
}

RootedPrecision rooted_precision(const VariogramMatrix& gamma, int root) {
  const Matrix sub = drop_index(farris_matrix(gamma.matrix(), root), root);
  Eigen::LLT<Matrix> llt(sub);
  if (llt.info() != Eigen::Success) {
    throw ValidationError(Reason::rank_deficient, "Farris covariance at root " + std::to_string(root + 1) +
                                                      " is not numerically positive definite");
  }
  const Matrix inv = symmetrize(llt.solve(Matrix::Identity(sub.rows(), sub.cols())));
  if (!inv.allFinite()) {
    throw ValidationError(Reason::rank_deficient, "Farris covariance is numerically singular");
  }
  return RootedPrecision{root, insert_zero_index(inv, root)};
}

Matrix symmetric_pinv(const Matrix& a, double rel_tol, int* rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(a));
  const Vector& vals = eig.eigenvalues();
  const Matrix& vecs = eig.eigenvectors();
  const double cutoff = rel_tol * vals.cwiseAbs().maxCoeff();
  Matrix pinv = Matrix::Zero(a.rows(), a.cols());
  int kept = 0;
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (std::abs(vals(k)) <= cutoff) continue;
    pinv.noalias() += (vecs.col(k) / vals(k)) * vecs.col(k).transpose();
    ++kept;
  }
  if (rank != nullptr) *rank = kept;
  return symmetrize(pinv);
}

HRPrecision precision_from_gamma(const VariogramMatrix& gamma) {
  const int d = gamma.dim();
  const Matrix p = centering_matrix(d);
  const Matrix centered = p * (-0.5 * gamma.matrix()) * p;
  int rank = 0;
  Matrix theta = symmetric_pinv(centered, kRankTolerance, &rank);
  if (rank != d - 1) {
    throw ValidationError(Reason::rank_deficient,
                          "precision has rank " + std::to_string(rank) + ", expected " + std::to_string(d - 1));
  }
  // Remove round-off from the row sums while keeping symmetry.
  theta = p * theta * p;
  return HRPrecision(symmetrize(theta));
}

HRPrecision HRPrecision::from_matrix(const Matrix& theta, double tol) {
  require_square(theta, "precision");
  const int d = static_cast<int>(theta.rows());
  if (d < 2) throw ValidationError(Reason::too_small, "precision dimension must be at least 2");
  if (!theta.allFinite()) throw ValidationError(Reason::not_finite, "precision has non-finite entries");
  const double scale = std::max(1e-300, theta.cwiseAbs().maxCoeff());
  if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw ValidationError(Reason::asymmetric, "precision is not symmetric");
  }
  if ((theta * Vector::Ones(d)).cwiseAbs().maxCoeff() > tol * scale) {
    throw ValidationError(Reason::nonzero_row_sums, "precision rows do not sum to zero");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(theta), Eigen::EigenvaluesOnly);
  const Vector& vals = eig.eigenvalues();
  const double top = vals.cwiseAbs().maxCoeff();
  // vals are ascending: exactly one ~0 eigenvalue and the rest positive.
  if (vals(0) < -tol * top || vals(1) <= kRankTolerance * top) {
    throw ValidationError(Reason::rank_deficient, "precision is not positive semi-definite of rank d-1");
  }
  return HRPrecision(symmetrize(theta));
}

VariogramMatrix gamma_from_precision(const HRPrecision& theta) {
  const int d = theta.dim();
  int rank = 0;
  const Matrix cov = symmetric_pinv(theta.matrix(), kRankTolerance, &rank);
  if (rank != d - 1) {
    throw ValidationError(Reason::rank_deficient,
                          "precision has rank " + std::to_string(rank) + ", expected " + std::to_string(d - 1));
  }
  Matrix gamma = inverse_farris(cov);
  gamma.diagonal().setZero();
  return validate_variogram(symmetrize(gamma));
}

Graph graph_from_precision(const Matrix& theta, double tol) {
  require_square(theta, "precision");
  const int d = static_cast<int>(theta.rows());
  if (tol < 0.0) tol = kPrecisionZeroTolerance * theta.cwiseAbs().maxCoeff();
  Graph g(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (std::abs(theta(i, j)) > tol) g.add_edge(i, j);
    }
  }
  return g;
}

Graph graph_from_precision(const HRPrecision& theta, double tol) {
  return graph_from_precision(theta.matrix(), tol);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

HrBivariate::HrBivariate(double gamma_ij) : gamma_(gamma_ij) {
  if (!(gamma_ij > 0.0) || !std::isfinite(gamma_ij)) {
    throw ValidationError(Reason::nonpositive_offdiagonal, "bivariate variogram value must be positive");
  }
  lambda_ = 0.5 * std::sqrt(gamma_ij);
}

double HrBivariate::stable_tail(double x, double y) const {
  if (x <= 0.0) return std::max(y, 0.0);
  if (y <= 0.0) return x;
  const double log_ratio = std::log(x) - std::log(y);
  return x * normal_cdf(lambda_ + log_ratio / (2.0 * lambda_)) +
         y * normal_cdf(lambda_ - log_ratio / (2.0 * lambda_));
}

double HrBivariate::tail_function(double x, double y) const {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  // Survival-function form avoids cancellation in x + y - L.
  const double log_ratio = std::log(x) - std::log(y);
  return x * normal_cdf(-(lambda_ + log_ratio / (2.0 * lambda_))) +
         y * normal_cdf(-(lambda_ - log_ratio / (2.0 * lambda_)));
}

double HrBivariate::density(double x, double y) const {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  const double log_ratio = std::log(x) - std::log(y);
  const double norm = 2.0 * std::sqrt(2.0 * std::numbers::pi) * lambda_ * std::sqrt(x * y);
  return std::exp(-0.5 * lambda_ * lambda_ - log_ratio * log_ratio / (8.0 * lambda_ * lambda_)) / norm;
}

}  // namespace hrgraph
