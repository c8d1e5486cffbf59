#pragma once

// Majority voting over rooted base-learner runs.
//
// For every root m the base learner receives the Farris covariance of the
// (empirical) variogram with row/column m removed and returns a sparsity
// pattern. Pattern entries for pairs not involving m are votes; an edge
// {i,j} enters the final graph iff strictly more than half of the roots
// m not in {i,j} vote for it.

#include <optional>
#include <string>
#include <vector>

#include "hrgraph/graph.hpp"
#include "hrgraph/hr_model.hpp"
#include "hrgraph/sparse_solvers.hpp"

namespace hrgraph {

enum class BaseLearner { neighborhood_selection, graphical_lasso };

std::string to_string(BaseLearner base);
BaseLearner base_learner_from_string(const std::string& name);

// Penalties indexed by (root m, regressed variable ell), both as node indices
// of the full graph. Neighborhood selection reads (m, ell); the graphical lasso
// reads one value per root.
class PenaltyTable {
 public:
  static PenaltyTable shared(double rho);
  static PenaltyTable per_root(const Vector& rho);
  // d x d table; only off-diagonal entries are read.
  static PenaltyTable per_regression(const Matrix& rho);

  double at(int root, int ell) const;
  double root(int m) const;
  bool is_per_regression() const { return kind_ == Kind::per_regression; }

 private:
  enum class Kind { shared, per_root, per_regression };
  Kind kind_ = Kind::shared;
  double scalar_ = 0.0;
  Vector roots_;
  Matrix table_;
};

struct LearnerConfig {
  BaseLearner base = BaseLearner::neighborhood_selection;
  PenaltyTable rho = PenaltyTable::shared(0.0);
  SolverOptions solver;
};

// Layer m is the d x d vote matrix Z~^(m) with a zero m-th row and column, or
// empty when root m abstained (non-positive Farris diagonal).
struct VoteStack {
  std::vector<std::optional<Eigen::MatrixXi>> layers;
};

struct EglearnResult {
  Graph graph;
  VoteStack votes;
  std::vector<int> abstained_roots;
};

// Requires d >= 3. Base-learner failures are rethrown with the root index.
EglearnResult eglearn(const Matrix& gamma_hat, const LearnerConfig& cfg);

// Applies the strict-majority rule to a vote stack.
Graph majority_vote(const VoteStack& votes);

struct GraphPath {
  std::vector<double> rho_grid;
  std::vector<Graph> graphs;
  std::vector<bool> connected;
  std::vector<double> densities;
};

// One eglearn run per shared penalty. rho_grid must be strictly increasing
// and non-negative.
GraphPath eglearn_path(const Matrix& gamma_hat, BaseLearner base, const std::vector<double>& rho_grid,
                       const SolverOptions& opts = {});

// `count` geometric values from rho_max/ratio to rho_max, where rho_max is the
// smallest shared penalty giving an empty graph (bracketed by halving down from
// a bound that is always empty, then refined by bisection).
std::vector<double> default_rho_grid(const Matrix& gamma_hat, BaseLearner base, int count = 30,
                                     double ratio = 100.0, const SolverOptions& opts = {});

// Smallest shared penalty producing an empty eglearn graph.
double empty_graph_penalty(const Matrix& gamma_hat, BaseLearner base, const SolverOptions& opts = {});

// True if every graph's edge set contains the next one's.
bool is_nested(const GraphPath& path);

// Graph with the largest penalty among the connected graphs of the path.
std::optional<Graph> sparsest_connected(const GraphPath& path);

enum class InformationCriterion { aic, bic, mbic };

std::string to_string(InformationCriterion ic);
InformationCriterion criterion_from_string(const std::string& name);

// Complexity weight per nonzero coefficient: 2, log k, or log k * log log(d-1).
double ic_penalty_weight(InformationCriterion ic, int k, int d);

// Goodness-of-fit term of the criterion. `rss` uses RSS itself; `log_rss`
// uses the Gaussian profile log-likelihood k log(RSS / k), which does not
// change when Gamma is rescaled.
enum class IcFit { rss, log_rss };

std::string to_string(IcFit fit);
IcFit ic_fit_from_string(const std::string& name);

struct ICReport {
  InformationCriterion criterion = InformationCriterion::bic;
  IcFit fit = IcFit::rss;
  int k = 0;
  // selected(m, ell) is the chosen grid penalty; NaN on the diagonal and for
  // abstaining roots.
  Matrix selected_rho;
  Graph graph;
  VoteStack votes;
};

// Per-(m, ell) tuning of neighborhood selection: each lasso picks the grid
// penalty minimizing fit + weight * ||theta||_0 with
// RSS = k (A_ll - 2 A_{l,-l} theta + theta' A_{-l,-l} theta). Ties go to the
// smallest penalty.
ICReport select_ic(const Matrix& gamma_hat, const std::vector<double>& rho_grid, InformationCriterion criterion,
                   int k, const SolverOptions& opts = {}, IcFit fit = IcFit::rss);

}  // namespace hrgraph
