#include "hrgraph/tail_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hrgraph/errors.hpp"
#include "hrgraph/log.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;

// Row indices of column `col` sorted ascending by value, ties by row order.
std::vector<int> ascending_order(const Matrix& values, int col) {
  std::vector<int> order(values.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values(a, col) < values(b, col); });
  return order;
}

}  // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 2) throw ValidationError(Reason::too_small, "data needs at least 2 rows");
  if (values_.cols() < 1) throw ValidationError(Reason::too_small, "data needs at least 1 column");
  if (!values_.allFinite()) throw ValidationError(Reason::not_finite, "data contains non-finite values");
}

int default_k(int n) {
  // Guard against pow() landing just below an exact integer.
  int k = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.7)));
  while (std::pow(static_cast<double>(k + 1), 1.0 / 0.7) <= n * (1.0 + 1e-15)) ++k;
  while (k > 0 && std::pow(static_cast<double>(k), 1.0 / 0.7) > n * (1.0 + 1e-15)) --k;
  return k;
}

int sample_size_for_k(int k) {
  if (k < 1) throw ValidationError(Reason::bad_argument, "k must be positive");
  int n = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(k), 1.0 / 0.7))) - 2);
  while (default_k(n) < k) ++n;
  while (n > 2 && default_k(n - 1) >= k) --n;
  return n;
}

RankTransform rank_transform(const DataMatrix& data) {
  const Matrix& x = data.values();
  const int n = data.n();
  const int d = data.d();
  RankTransform out;
  out.survival.resize(n, d);
  out.ranks.resize(n, d);
  for (int col = 0; col < d; ++col) {
    const auto order = ascending_order(x, col);
    if (x(order.front(), col) == x(order.back(), col)) {
      throw ValidationError(Reason::constant_column, "column " + std::to_string(col + 1) + " is constant");
    }
    bool tied = false;
    for (int r = 0; r < n; ++r) {
      const int row = order[r];
      out.ranks(row, col) = r + 1;
      out.survival(row, col) = static_cast<double>(n - r) / n;
      if (r > 0 && x(order[r - 1], col) == x(row, col)) tied = true;
    }
    if (tied) {
      out.tied_columns.push_back(col);
      logger()->warn("column {} contains ties; broken by order of occurrence", col + 1);
    }
  }
  return out;
}

EmpiricalVariogram empirical_variogram(const DataMatrix& data, int k) {
  const int n = data.n();
  const int d = data.d();
  if (d < 2) throw ValidationError(Reason::too_small, "empirical variogram needs d >= 2");
  if (k < 1 || k >= n) {
    throw ValidationError(Reason::bad_argument,
                          "k must satisfy 1 <= k < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  const RankTransform rt = rank_transform(data);
  const Matrix log_surv = rt.survival.array().log().matrix();

  EmpiricalVariogram out;
  out.k = k;
  out.n = n;
  out.tied_columns = rt.tied_columns;
  out.rooted.reserve(d);
  out.pooled = Matrix::Zero(d, d);

  Matrix selected(k, d);
  for (int m = 0; m < d; ++m) {
    // The k largest values of column m are exactly the rows with rank > n-k.
    for (int t = 0, s = 0; t < n; ++t) {
      if (rt.ranks(t, m) > n - k) selected.row(s++) = log_surv.row(t);
    }
    Matrix g = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const Vector diff = selected.col(i) - selected.col(j);
        const double mean = diff.mean();
        const double var = (diff.array() - mean).square().sum() / k;
        g(i, j) = var;
        g(j, i) = var;
      }
    }
    out.pooled += g;
    out.rooted.push_back(std::move(g));
  }
  out.pooled /= d;
  return out;
}

std::vector<ConsistencyRow> variogram_consistency_probe(const VariogramMatrix& gamma, const Sampler& sampler,
                                                        const std::vector<int>& k_grid,
                                                        const std::function<int(int)>& n_for_k, int replications,
                                                        std::uint64_t base_seed) {
  std::vector<ConsistencyRow> rows;
  for (int k : k_grid) {
    ConsistencyRow row;
    row.k = k;
    row.n = n_for_k(k);
    for (int r = 0; r < replications; ++r) {
      const DataMatrix data(sampler(row.n, base_seed + static_cast<std::uint64_t>(r)));
      const auto est = empirical_variogram(data, k);
      double worst = 0.0;
      for (const auto& g : est.rooted) worst = std::max(worst, (g - gamma.matrix()).cwiseAbs().maxCoeff());
      row.errors.push_back(worst);
    }
    row.mean_error = std::accumulate(row.errors.begin(), row.errors.end(), 0.0) / replications;
    rows.push_back(std::move(row));
  }
  return rows;
}

double loglog_slope(const std::vector<ConsistencyRow>& rows) {
  const auto m = static_cast<double>(rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.k));
    const double y = std::log(r.mean_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double empirical_extremal_coefficient(const DataMatrix& data, int i, int j, int k) {
  const int n = data.n();
  if (k < 1 || k >= n) throw ValidationError(Reason::bad_argument, "k must satisfy 1 <= k < n");
  const RankTransform rt = rank_transform(data);
  int count = 0;
  for (int t = 0; t < n; ++t) {
    if (rt.ranks(t, i) > n - k || rt.ranks(t, j) > n - k) ++count;
  }
  return static_cast<double>(count) / k;
}

}  // namespace hrgraph
