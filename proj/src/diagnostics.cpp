#include "hrgraph/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "hrgraph/errors.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix submatrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void require_matching_graph(const HRPrecision& theta, const Graph& g) {
  if (g.dim() != theta.dim()) {
    throw ValidationError(Reason::dimension_mismatch, "graph and variogram dimensions differ");
  }
  if (!(graph_from_precision(theta) == g)) {
    throw ValidationError(Reason::bad_argument, "graph does not match the zero pattern of the precision matrix");
  }
}

}  // namespace

Graph extremal_mst(const Matrix& gamma_hat) {
  if (gamma_hat.rows() != gamma_hat.cols()) throw ValidationError(Reason::not_square, "variogram must be square");
  const int d = static_cast<int>(gamma_hat.rows());
  if (d < 2) throw ValidationError(Reason::too_small, "spanning tree needs d >= 2");
  if (!gamma_hat.allFinite()) throw ValidationError(Reason::not_finite, "variogram has non-finite entries");

  std::vector<std::tuple<double, int, int>> candidates;
  candidates.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) candidates.emplace_back(gamma_hat(i, j), i, j);
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  Graph tree(d);
  for (const auto& [w, i, j] : candidates) {
    const int ri = find_root(parent, i);
    const int rj = find_root(parent, j);
    if (ri == rj) continue;
    parent[ri] = rj;
    tree.add_edge(i, j);
    if (static_cast<int>(tree.num_edges()) == d - 1) break;
  }
  return tree;
}

Confusion confusion(const Graph& truth, const Graph& estimate) {
  if (truth.dim() != estimate.dim()) {
    throw ValidationError(Reason::dimension_mismatch, "graphs have different dimensions");
  }
  Confusion c;
  for (const auto& e : estimate.edges()) {
    if (truth.has_edge(e.lo, e.hi)) {
      ++c.true_positives;
    } else {
      ++c.false_positives;
    }
  }
  c.false_negatives = static_cast<int>(truth.num_edges()) - c.true_positives;
  return c;
}

double f_score(const Graph& truth, const Graph& estimate) {
  const Confusion c = confusion(truth, estimate);
  if (truth.num_edges() == 0 && estimate.num_edges() == 0) return 1.0;
  return c.true_positives / (c.true_positives + 0.5 * (c.false_positives + c.false_negatives));
}

double op_norm_inf(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

NsDiagnostics ns_diagnostics(const VariogramMatrix& gamma, const Graph& g, const std::optional<PenaltyBounds>& bounds) {
  const HRPrecision theta = precision_from_gamma(gamma);
  require_matching_graph(theta, g);
  const int d = gamma.dim();

  NsDiagnostics out;
  out.s = g.max_degree();
  out.theta_min = kInf;
  for (const auto& e : g.edges()) {
    const double t = std::abs(theta(e.lo, e.hi));
    out.theta_min = std::min({out.theta_min, t / theta(e.hi, e.hi), t / theta(e.lo, e.lo)});
  }
  out.lambda = kInf;
  out.kappa = 0.0;
  out.vartheta = 0.0;
  out.eta = kInf;

  for (int m = 0; m < d; ++m) {
    const Matrix sigma = farris_matrix(gamma.matrix(), m);
    for (int ell = 0; ell < d; ++ell) {
      if (ell == m) continue;
      std::vector<int> s_set;
      std::vector<int> s_comp;
      for (int i = 0; i < d; ++i) {
        if (i == m || i == ell) continue;
        (g.has_edge(i, ell) ? s_set : s_comp).push_back(i);
      }
      if (s_set.empty()) continue;
      const Matrix sss = submatrix(sigma, s_set, s_set);
      const Matrix scs = submatrix(sigma, s_comp, s_set);
      const Matrix inv = sss.llt().solve(Matrix::Identity(sss.rows(), sss.cols()));
      Eigen::SelfAdjointEigenSolver<Matrix> eig(sss, Eigen::EigenvaluesOnly);

      NsPairDiagnostics pair;
      pair.root = m;
      pair.ell = ell;
      pair.lambda = eig.eigenvalues().minCoeff();
      pair.kappa = op_norm_inf(scs);
      pair.vartheta = op_norm_inf(inv);
      pair.eta = 1.0 - op_norm_inf(scs * inv);
      out.lambda = std::min(out.lambda, pair.lambda);
      out.kappa = std::max(out.kappa, pair.kappa);
      out.vartheta = std::max(out.vartheta, pair.vartheta);
      out.eta = std::min(out.eta, pair.eta);
      out.pairs.push_back(pair);
    }
  }

  if (bounds && !out.pairs.empty()) {
    const double s = out.s;
    const double kv = 1.0 + out.kappa * out.vartheta;
    const double c = std::min({out.lambda / (2.0 * s), out.eta / (4.0 * out.vartheta * kv * s),
                               (out.theta_min - out.vartheta * bounds->rho_max) / (2.0 * out.vartheta * kv),
                               bounds->rho_min * out.eta / (8.0 * kv * kv)});
    out.recovery_radius = 2.0 / 3.0 * c;
  }
  return out;
}

GlDiagnostics gl_diagnostics(const VariogramMatrix& gamma, const Graph& g, const std::optional<PenaltyBounds>& bounds) {
  const HRPrecision theta = precision_from_gamma(gamma);
  require_matching_graph(theta, g);
  const int d = gamma.dim();
  const int p = d - 1;

  GlDiagnostics out;
  out.s = g.max_degree();
  out.theta_min = kInf;
  for (const auto& e : g.edges()) out.theta_min = std::min(out.theta_min, std::abs(theta(e.lo, e.hi)));
  out.eta = kInf;
  out.min_farris_diagonal = kInf;

  for (int m = 0; m < d; ++m) {
    const Matrix full = farris_matrix(gamma.matrix(), m);
    const Matrix sigma = drop_index(full, m);
    out.kappa_sigma = std::max(out.kappa_sigma, op_norm_inf(full));
    out.min_farris_diagonal = std::min(out.min_farris_diagonal, sigma.diagonal().minCoeff());

    auto node = [m](int a) { return a < m ? a : a + 1; };
    std::vector<std::pair<int, int>> s_pairs;
    std::vector<std::pair<int, int>> c_pairs;
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        const bool in_s = a == b || g.has_edge(node(a), node(b));
        (in_s ? s_pairs : c_pairs).emplace_back(a, b);
      }
    }
    auto omega = [&](const std::vector<std::pair<int, int>>& rows, const std::vector<std::pair<int, int>>& cols) {
      Matrix out_block(rows.size(), cols.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          out_block(r, c) = sigma(rows[r].first, cols[c].first) * sigma(rows[r].second, cols[c].second);
        }
      }
      return out_block;
    };
    const Matrix oss = omega(s_pairs, s_pairs);
    Eigen::FullPivLU<Matrix> lu(oss);
    if (!lu.isInvertible()) {
      throw ValidationError(Reason::rank_deficient, "Omega_SS is singular at root " + std::to_string(m + 1));
    }
    const Matrix inv = lu.inverse();
    const Matrix ocs = omega(c_pairs, s_pairs);
    const double eta_m = 1.0 - op_norm_inf(ocs * inv);
    out.kappa_omega = std::max(out.kappa_omega, op_norm_inf(inv));
    out.eta_per_root.push_back(eta_m);
    out.eta = std::min(out.eta, eta_m);
  }

  out.chi0 = 6.0 * out.kappa_sigma * out.kappa_omega *
             std::max(1.0, 9.0 * out.kappa_sigma * out.kappa_sigma * out.kappa_omega / out.eta);
  if (bounds) {
    const double c =
        std::min({out.min_farris_diagonal, out.eta * bounds->rho_min / 8.0,
                  1.0 / (out.chi0 * out.s) - bounds->rho_max, out.theta_min / (4.0 * out.kappa_omega) - bounds->rho_max});
    out.recovery_radius = 2.0 / 3.0 * c;
  }
  return out;
}

bool emtp2_check(const HRPrecision& theta, double tol) {
  const int d = theta.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (theta(i, j) > tol) return false;
    }
  }
  return true;
}

double positive_offdiag_fraction(const HRPrecision& theta, double tol) {
  const int d = theta.dim();
  if (d < 2) return 0.0;
  int positive = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (theta(i, j) > tol) ++positive;
    }
  }
  return positive / (0.5 * d * (d - 1));
}

}  // namespace hrgraph
