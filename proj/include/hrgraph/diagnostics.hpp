#pragma once

// Baselines (extremal minimum spanning tree), the F-score, and the
// population quantities that govern exact recovery by neighborhood selection
// and graphical lasso base learners.

#include <optional>
#include <vector>

#include "hrgraph/graph.hpp"
#include "hrgraph/hr_model.hpp"

namespace hrgraph {

// Minimum-weight spanning tree with weights gamma_hat(i,j). Ties are broken
// by lexicographic edge order.
Graph extremal_mst(const Matrix& gamma_hat);

struct Confusion {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

Confusion confusion(const Graph& truth, const Graph& estimate);

// |E n E^| / (|E n E^| + (|E^c n E^| + |E n E^c|)/2); 1 when both are empty.
double f_score(const Graph& truth, const Graph& estimate);

// L-infinity operator norm (max absolute row sum); 0 for an empty matrix.
double op_norm_inf(const Matrix& m);

struct PenaltyBounds {
  double rho_min = 0.0;
  double rho_max = 0.0;
};

struct NsPairDiagnostics {
  int root = 0;
  int ell = 0;
  double lambda = 0.0;
  double kappa = 0.0;
  double vartheta = 0.0;
  double eta = 0.0;
};

struct NsDiagnostics {
  int s = 0;
  double theta_min = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;
  double vartheta = 0.0;
  double eta = 0.0;
  std::optional<double> recovery_radius;  // C^ns, when penalty bounds are given
  std::vector<NsPairDiagnostics> pairs;   // (m, ell) with non-empty S_{m,ell}
};

struct GlDiagnostics {
  int s = 0;
  double theta_min = 0.0;
  double kappa_sigma = 0.0;
  double kappa_omega = 0.0;
  double eta = 0.0;
  double chi0 = 0.0;
  double min_farris_diagonal = 0.0;
  std::optional<double> recovery_radius;  // C^gl, when penalty bounds are given
  std::vector<double> eta_per_root;
};

// S_{m,ell} = {i not in {m,ell} : Theta_{i,ell} != 0}; its complement is
// taken among the remaining regressors V \ {m, ell}. Pairs with empty
// S_{m,ell} are skipped. Throws ValidationError if `g` is not the graph of
// the precision of `gamma`.
NsDiagnostics ns_diagnostics(const VariogramMatrix& gamma, const Graph& g,
                             const std::optional<PenaltyBounds>& bounds = std::nullopt);

// Omega^(m) is the Kronecker square of the reduced Farris covariance, with
// pairs (i,j) over V \ {m} indexed row-major. S_m includes the diagonal pairs.
GlDiagnostics gl_diagnostics(const VariogramMatrix& gamma, const Graph& g,
                             const std::optional<PenaltyBounds>& bounds = std::nullopt);

// True iff every off-diagonal entry of Theta is <= tol.
bool emtp2_check(const HRPrecision& theta, double tol = 1e-9);

// Fraction of pairs i<j with Theta_ij > tol.
double positive_offdiag_fraction(const HRPrecision& theta, double tol = 1e-9);

}  // namespace hrgraph
