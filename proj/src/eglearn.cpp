#include "hrgraph/eglearn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrgraph/errors.hpp"
#include "hrgraph/log.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;

int node_of(int sub_index, int root) { return sub_index < root ? sub_index : sub_index + 1; }

void require_gamma_hat(const Matrix& gamma_hat) {
  if (gamma_hat.rows() != gamma_hat.cols()) throw ValidationError(Reason::not_square, "variogram must be square");
  if (gamma_hat.rows() < 3) throw ValidationError(Reason::too_small, "eglearn requires d >= 3");
  if (!gamma_hat.allFinite()) throw ValidationError(Reason::not_finite, "variogram has non-finite entries");
}

// Reduced Farris covariance at `root`, or nullopt when its diagonal is not
// strictly positive.
std::optional<Matrix> base_input(const Matrix& gamma_hat, int root) {
  Matrix a = drop_index(farris_matrix(gamma_hat, root), root);
  a = 0.5 * (a + a.transpose().eval());
  if ((a.diagonal().array() <= 0.0).any()) return std::nullopt;
  return a;
}

SparsityPattern run_base(const Matrix& a, int root, const LearnerConfig& cfg) {
  const int p = static_cast<int>(a.rows());
  try {
    if (cfg.base == BaseLearner::neighborhood_selection) {
      Vector rho(p);
      for (int s = 0; s < p; ++s) rho(s) = cfg.rho.at(root, node_of(s, root));
      return neighborhood_selection(a, rho, cfg.solver);
    }
    return glasso_pattern(a, cfg.rho.root(root), cfg.solver);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("root " + std::to_string(root + 1) + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(e.reason(), "root " + std::to_string(root + 1) + ": " + e.what());
  }
}

Eigen::MatrixXi embed_pattern(const SparsityPattern& z, int root) {
  return insert_zero_index(z.cast<double>(), root).cast<int>();
}

}  // namespace

std::string to_string(BaseLearner base) {
  return base == BaseLearner::neighborhood_selection ? "neighborhood_selection" : "graphical_lasso";
}

BaseLearner base_learner_from_string(const std::string& name) {
  if (name == "ns" || name == "neighborhood_selection") return BaseLearner::neighborhood_selection;
  if (name == "gl" || name == "graphical_lasso") return BaseLearner::graphical_lasso;
  throw ValidationError(Reason::bad_argument, "unknown base learner '" + name + "'");
}

PenaltyTable PenaltyTable::shared(double rho) {
  if (!(rho >= 0.0)) throw ValidationError(Reason::bad_argument, "penalties must be non-negative");
  PenaltyTable t;
  t.kind_ = Kind::shared;
  t.scalar_ = rho;
  return t;
}

PenaltyTable PenaltyTable::per_root(const Vector& rho) {
  if ((rho.array() < 0.0).any() || !rho.allFinite()) {
    throw ValidationError(Reason::bad_argument, "penalties must be non-negative");
  }
  PenaltyTable t;
  t.kind_ = Kind::per_root;
  t.roots_ = rho;
  return t;
}

PenaltyTable PenaltyTable::per_regression(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw ValidationError(Reason::not_square, "penalty table must be square");
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if (i != j && !(rho(i, j) >= 0.0)) {
        throw ValidationError(Reason::bad_argument, "penalties must be non-negative");
      }
    }
  }
  PenaltyTable t;
  t.kind_ = Kind::per_regression;
  t.table_ = rho;
  return t;
}

double PenaltyTable::at(int root, int ell) const {
  switch (kind_) {
    case Kind::shared:
      return scalar_;
    case Kind::per_root:
      return roots_(root);
    case Kind::per_regression:
      return table_(root, ell);
  }
  return scalar_;
}

double PenaltyTable::root(int m) const {
  switch (kind_) {
    case Kind::shared:
      return scalar_;
    case Kind::per_root:
      return roots_(m);
    case Kind::per_regression:
      throw ValidationError(Reason::bad_argument, "graphical lasso takes one penalty per root");
  }
  return scalar_;
}

Graph majority_vote(const VoteStack& votes) {
  const int d = static_cast<int>(votes.layers.size());
  Graph g(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      int voters = 0;
      int yes = 0;
      for (int m = 0; m < d; ++m) {
        if (m == i || m == j || !votes.layers[m]) continue;
        ++voters;
        if ((*votes.layers[m])(i, j) == 1) ++yes;
      }
      // Strictly more than half; a tie is no edge.
      if (voters > 0 && 2 * yes > voters) g.add_edge(i, j);
    }
  }
  return g;
}

EglearnResult eglearn(const Matrix& gamma_hat, const LearnerConfig& cfg) {
  require_gamma_hat(gamma_hat);
  const int d = static_cast<int>(gamma_hat.rows());
  EglearnResult out;
  out.votes.layers.resize(d);
  for (int m = 0; m < d; ++m) {
    const auto a = base_input(gamma_hat, m);
    if (!a) {
      logger()->warn("root {} abstains: Farris covariance has a non-positive diagonal", m + 1);
      out.abstained_roots.push_back(m);
      continue;
    }
    out.votes.layers[m] = embed_pattern(run_base(*a, m, cfg), m);
  }
  out.graph = majority_vote(out.votes);
  return out;
}

GraphPath eglearn_path(const Matrix& gamma_hat, BaseLearner base, const std::vector<double>& rho_grid,
                       const SolverOptions& opts) {
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] >= 0.0)) throw ValidationError(Reason::bad_argument, "penalties must be non-negative");
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
      throw ValidationError(Reason::bad_argument, "penalty grid must be strictly increasing");
    }
  }
  GraphPath path;
  path.rho_grid = rho_grid;
  for (double rho : rho_grid) {
    LearnerConfig cfg{base, PenaltyTable::shared(rho), opts};
    auto res = eglearn(gamma_hat, cfg);
    path.connected.push_back(is_connected(res.graph));
    path.densities.push_back(res.graph.density());
    path.graphs.push_back(std::move(res.graph));
  }
  return path;
}

double empty_graph_penalty(const Matrix& gamma_hat, BaseLearner base, const SolverOptions& opts) {
  require_gamma_hat(gamma_hat);
  const int d = static_cast<int>(gamma_hat.rows());
  // Every base learner returns an empty pattern above this value.
  double bound = 0.0;
  for (int m = 0; m < d; ++m) {
    const auto a = base_input(gamma_hat, m);
    if (!a) continue;
    Matrix off = a->cwiseAbs();
    off.diagonal().setZero();
    bound = std::max(bound, off.maxCoeff());
  }
  if (base == BaseLearner::neighborhood_selection) bound *= 2.0;
  if (!(bound > 0.0)) return 0.0;

  auto empty_at = [&](double rho) {
    return eglearn(gamma_hat, LearnerConfig{base, PenaltyTable::shared(rho), opts}).graph.num_edges() == 0;
  };
  // Halve down from the bound, which is known to be empty, so that no probe
  // runs at a penalty far below the answer where solvers are slowest.
  double hi = bound;
  double lo = 0.5 * bound;
  while (empty_at(lo)) {
    hi = lo;
    lo *= 0.5;
    if (lo < bound * 1e-12) return hi;
  }
  for (int it = 0; it < 14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (empty_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> default_rho_grid(const Matrix& gamma_hat, BaseLearner base, int count, double ratio,
                                     const SolverOptions& opts) {
  if (count < 2) throw ValidationError(Reason::bad_argument, "grid needs at least two values");
  const double rho_max = empty_graph_penalty(gamma_hat, base, opts);
  if (!(rho_max > 0.0)) throw ValidationError(Reason::bad_argument, "variogram yields no edges at any penalty");
  const double rho_min = rho_max / ratio;
  std::vector<double> grid(count);
  const double step = std::log(rho_max / rho_min) / (count - 1);
  for (int i = 0; i < count; ++i) grid[i] = rho_min * std::exp(step * i);
  grid.back() = rho_max;
  return grid;
}

bool is_nested(const GraphPath& path) {
  for (std::size_t i = 1; i < path.graphs.size(); ++i) {
    for (const auto& e : path.graphs[i].edges()) {
      if (!path.graphs[i - 1].has_edge(e.lo, e.hi)) return false;
    }
  }
  return true;
}

std::optional<Graph> sparsest_connected(const GraphPath& path) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < path.graphs.size(); ++i) {
    const bool conn = i < path.connected.size() ? path.connected[i] : is_connected(path.graphs[i]);
    if (!conn) continue;
    if (!best || path.rho_grid[i] > path.rho_grid[*best]) best = i;
  }
  if (!best) return std::nullopt;
  return path.graphs[*best];
}

std::string to_string(InformationCriterion ic) {
  switch (ic) {
    case InformationCriterion::aic:
      return "aic";
    case InformationCriterion::bic:
      return "bic";
    case InformationCriterion::mbic:
      return "mbic";
  }
  return "bic";
}

InformationCriterion criterion_from_string(const std::string& name) {
  if (name == "aic" || name == "AIC") return InformationCriterion::aic;
  if (name == "bic" || name == "BIC") return InformationCriterion::bic;
  if (name == "mbic" || name == "MBIC") return InformationCriterion::mbic;
  throw ValidationError(Reason::bad_argument, "unknown information criterion '" + name + "'");
}

double ic_penalty_weight(InformationCriterion ic, int k, int d) {
  switch (ic) {
    case InformationCriterion::aic:
      return 2.0;
    case InformationCriterion::bic:
      return std::log(static_cast<double>(k));
    case InformationCriterion::mbic:
      if (d - 1 < 3) throw ValidationError(Reason::too_small, "MBIC needs d - 1 >= 3");
      return std::log(static_cast<double>(k)) * std::log(std::log(static_cast<double>(d - 1)));
  }
  return 0.0;
}

std::string to_string(IcFit fit) { return fit == IcFit::rss ? "rss" : "log_rss"; }

IcFit ic_fit_from_string(const std::string& name) {
  if (name == "rss") return IcFit::rss;
  if (name == "log_rss") return IcFit::log_rss;
  throw ValidationError(Reason::bad_argument, "unknown criterion fit '" + name + "' (rss, log_rss)");
}

ICReport select_ic(const Matrix& gamma_hat, const std::vector<double>& rho_grid, InformationCriterion criterion,
                   int k, const SolverOptions& opts, IcFit fit) {
  require_gamma_hat(gamma_hat);
  if (k < 1) throw ValidationError(Reason::bad_argument, "k must be positive");
  if (rho_grid.empty()) throw ValidationError(Reason::bad_argument, "penalty grid is empty");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] >= 0.0)) throw ValidationError(Reason::bad_argument, "penalties must be non-negative");
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
      throw ValidationError(Reason::bad_argument, "penalty grid must be strictly increasing");
    }
  }
  const int d = static_cast<int>(gamma_hat.rows());
  const double weight = ic_penalty_weight(criterion, k, d);

  ICReport report;
  report.criterion = criterion;
  report.fit = fit;
  report.k = k;
  report.selected_rho = Matrix::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
  report.votes.layers.resize(d);

  for (int m = 0; m < d; ++m) {
    const auto a = base_input(gamma_hat, m);
    if (!a) {
      logger()->warn("root {} abstains: Farris covariance has a non-positive diagonal", m + 1);
      continue;
    }
    const int p = d - 1;
    SparsityPattern ne = SparsityPattern::Zero(p, p);
    for (int ell = 0; ell < p; ++ell) {
      const Matrix c = drop_index(*a, ell);
      Vector b(p - 1);
      for (int i = 0, o = 0; i < p; ++i) {
        if (i != ell) b(o++) = (*a)(i, ell);
      }
      const double a_ll = (*a)(ell, ell);
      Vector warm = Vector::Zero(p - 1);
      double best_score = std::numeric_limits<double>::infinity();
      std::size_t best_idx = 0;
      Vector best_theta = warm;
      for (std::size_t r = 0; r < rho_grid.size(); ++r) {
        auto sol = solve_quadratic_lasso(c, b, rho_grid[r], warm, opts);
        if (!sol.converged) {
          throw ConvergenceError("root " + std::to_string(m + 1) + ": lasso did not converge");
        }
        const double rss = k * (a_ll - 2.0 * b.dot(sol.theta) + sol.theta.dot(c * sol.theta));
        const double goodness = fit == IcFit::rss ? rss : k * std::log(std::max(rss, 0.0) / k);
        const double score = goodness + weight * static_cast<double>(sol.active_set.size());
        if (score < best_score) {
          best_score = score;
          best_idx = r;
          best_theta = sol.theta;
        }
        warm = sol.theta;
      }
      report.selected_rho(m, node_of(ell, m)) = rho_grid[best_idx];
      for (int i = 0; i < p - 1; ++i) {
        if (std::abs(best_theta(i)) > opts.zero_tol) ne(ell, i < ell ? i : i + 1) = 1;
      }
    }
    SparsityPattern z = SparsityPattern::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        const bool on = opts.and_rule ? (ne(i, j) && ne(j, i)) : (ne(i, j) || ne(j, i));
        z(i, j) = z(j, i) = on ? 1 : 0;
      }
    }
    report.votes.layers[m] = embed_pattern(z, m);
  }
  report.graph = majority_vote(report.votes);
  return report;
}

}  // namespace hrgraph
