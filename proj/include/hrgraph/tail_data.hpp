#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hrgraph/hr_model.hpp"

namespace hrgraph {

// n x d raw observations with arbitrary continuous margins.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  int n() const { return static_cast<int>(values_.rows()); }
  int d() const { return static_cast<int>(values_.cols()); }

 private:
  Matrix values_;
};

// Default number of exceedances floor(n^0.7).
int default_k(int n);

// Smallest n >= 2 with default_k(n) >= k.
int sample_size_for_k(int k);

struct RankTransform {
  // Entry (t,i) = 1 - F~_i(X_ti) = (n + 1 - rank)/n, rank being the 1-based
  // ascending rank with ties broken by order of occurrence.
  Matrix survival;
  // Ascending rank, 1..n, per column.
  Eigen::MatrixXi ranks;
  // Columns in which ties were found.
  std::vector<int> tied_columns;
};

// Throws ValidationError(constant_column) for a column with a single value.
RankTransform rank_transform(const DataMatrix& data);

struct EmpiricalVariogram {
  Matrix pooled;                // mean of the rooted estimates
  std::vector<Matrix> rooted;   // one d x d estimate per root
  int k = 0;
  int n = 0;
  std::vector<int> tied_columns;
};

// For each root m, takes the k rows with the largest values in column m and
// forms the variance (divisor k) of log-ratios of the survival
// pseudo-observations; pooled is the average over roots.
EmpiricalVariogram empirical_variogram(const DataMatrix& data, int k);

// Produces an n x d sample given (n, seed).
using Sampler = std::function<Matrix(int n, std::uint64_t seed)>;

struct ConsistencyRow {
  int k = 0;
  int n = 0;
  double mean_error = 0.0;  // mean over replications of max_m ||G^(m) - G||_inf
  std::vector<double> errors;
};

// Monte Carlo study of max_m ||Gamma_hat^(m) - Gamma||_inf against k. For each
// k the sample size is n_for_k(k); replication r uses seed base_seed + r.
std::vector<ConsistencyRow> variogram_consistency_probe(const VariogramMatrix& gamma, const Sampler& sampler,
                                                        const std::vector<int>& k_grid,
                                                        const std::function<int(int)>& n_for_k, int replications,
                                                        std::uint64_t base_seed);

// Least-squares slope of log(mean_error) on log(k).
double loglog_slope(const std::vector<ConsistencyRow>& rows);

// Rank-based estimate of L(1,1) for columns (i,j): the number of rows where
// either column is among its k largest values, divided by k.
double empirical_extremal_coefficient(const DataMatrix& data, int i, int j, int k);

}  // namespace hrgraph
