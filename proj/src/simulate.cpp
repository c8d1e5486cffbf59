#include "hrgraph/simulate.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <boost/random/beta_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "hrgraph/errors.hpp"
#include "hrgraph/log.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kOpMul = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kSubMul = 0xaef17502108ef2d9ULL;
constexpr int kMaxCliqueRetries = 100;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on (0, 1], safe for 1/u and log(u).
double open_uniform(CounterRng& rng) {
  return 1.0 - boost::random::uniform_01<double>()(rng);
}

// Root-wise ingredients of the log-Gaussian extremal functions.
struct RootFactor {
  Vector mean;  // -Gamma_{-m,m}/2
  Matrix chol;  // lower Cholesky factor of the reduced Farris covariance
};

std::vector<RootFactor> root_factors(const VariogramMatrix& gamma) {
  const int d = gamma.dim();
  std::vector<RootFactor> out(d);
  for (int m = 0; m < d; ++m) {
    const Matrix sigma = farris_transform(gamma, m).reduced();
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw ValidationError(Reason::not_conditionally_negative_definite,
                            "Farris covariance is not positive definite at root " + std::to_string(m + 1));
    }
    out[m].chol = llt.matrixL();
    out[m].mean.resize(d - 1);
    for (int i = 0, o = 0; i < d; ++i) {
      if (i != m) out[m].mean(o++) = -0.5 * gamma(i, m);
    }
  }
  return out;
}

// Z with Z_m = 1 and log Z_{-m} ~ N(mean, Sigma^(m)).
Vector draw_profile(const RootFactor& f, int m, CounterRng& rng) {
  boost::random::normal_distribution<double> normal;
  const Eigen::Index p = f.mean.size();
  Vector z(p);
  for (Eigen::Index i = 0; i < p; ++i) z(i) = normal(rng);
  const Vector logz = f.mean + f.chol * z;
  Vector out(p + 1);
  for (Eigen::Index i = 0, o = 0; i <= p; ++i) out(i) = i == m ? 1.0 : std::exp(logz(o++));
  return out;
}

void require_positive_n(int n) {
  if (n < 1) throw ValidationError(Reason::bad_argument, "sample size must be positive");
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t op, std::uint64_t sub)
    : base_(mix64(mix64(seed + kOpMul * op) + kSubMul * (sub + 1))) {}

CounterRng::result_type CounterRng::operator()() {
  return mix64(base_ + kGolden * (++counter_));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return CounterRng(seed, stream::task, index)();
}

Graph barabasi_albert(int d, int q, std::uint64_t seed) {
  if (q < 1 || q >= d) throw ValidationError(Reason::bad_argument, "Barabasi-Albert needs 1 <= q < d");
  CounterRng rng(seed, stream::barabasi_albert);
  Graph g(d);
  std::vector<double> degree(d, 0.0);
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      g.add_edge(i, j);
      degree[i] += 1.0;
      degree[j] += 1.0;
    }
  }
  for (int v = q; v < d; ++v) {
    std::vector<int> pool(v);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> targets;
    for (int draw = 0; draw < q; ++draw) {
      double total = 0.0;
      for (int u : pool) total += degree[u];
      std::size_t pick = 0;
      if (total > 0.0) {
        const double u01 = boost::random::uniform_real_distribution<double>(0.0, total)(rng);
        double acc = 0.0;
        pick = pool.size() - 1;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          acc += degree[pool[i]];
          if (u01 < acc && degree[pool[i]] > 0.0) {
            pick = i;
            break;
          }
        }
      } else {
        pick = boost::random::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
      }
      targets.push_back(pool[pick]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    // Degrees are updated after all q picks so that the new node's
    // attachment probabilities refer to the graph before it arrived.
    for (int u : targets) {
      g.add_edge(u, v);
      degree[u] += 1.0;
      degree[v] += 1.0;
    }
  }
  return g;
}

HrModel laplacian_gamma(const Graph& g, std::uint64_t seed, WeightRange range) {
  if (!(range.low > 0.0) || !(range.high >= range.low)) {
    throw ValidationError(Reason::bad_argument, "weight range must satisfy 0 < low <= high");
  }
  if (g.dim() < 2) throw ValidationError(Reason::too_small, "need at least 2 nodes");
  if (!is_connected(g)) throw ValidationError(Reason::disconnected_graph, "Laplacian model needs a connected graph");
  CounterRng rng(seed, stream::laplacian_weights);
  boost::random::uniform_real_distribution<double> weight(range.low, range.high);
  const int d = g.dim();
  Matrix theta = Matrix::Zero(d, d);
  for (const auto& e : g.edges()) {
    // Boost's uniform_real never returns when low == high.
    const double w = range.low == range.high ? range.low : weight(rng);
    theta(e.lo, e.hi) = theta(e.hi, e.lo) = -w;
    theta(e.lo, e.lo) += w;
    theta(e.hi, e.hi) += w;
  }
  HRPrecision precision = HRPrecision::from_matrix(theta);
  VariogramMatrix gamma = gamma_from_precision(precision);
  return HrModel{g, std::move(gamma), std::move(precision)};
}

Matrix vine_correlation(int n, double alpha, CounterRng& rng) {
  if (n < 1) throw ValidationError(Reason::bad_argument, "correlation dimension must be positive");
  if (!(alpha > 0.0)) throw ValidationError(Reason::bad_argument, "alpha must be positive");
  Matrix partial = Matrix::Zero(n, n);
  Matrix corr = Matrix::Identity(n, n);
  double beta = alpha + 0.5 * (n - 1);
  for (int k = 0; k < n - 1; ++k) {
    beta -= 0.5;
    boost::random::beta_distribution<double> draw(beta, beta);
    for (int i = k + 1; i < n; ++i) {
      partial(k, i) = 2.0 * draw(rng) - 1.0;
      double p = partial(k, i);
      for (int l = k - 1; l >= 0; --l) {
        p = p * std::sqrt((1.0 - partial(l, i) * partial(l, i)) * (1.0 - partial(l, k) * partial(l, k))) +
            partial(l, i) * partial(l, k);
      }
      corr(k, i) = corr(i, k) = p;
    }
  }
  return corr;
}

HrModel block_model_gamma(int n_cliques, int n_nodes, double alpha, std::uint64_t seed) {
  if (n_cliques < 1 || n_nodes < 2) throw ValidationError(Reason::bad_argument, "block model needs n_C >= 1, n_N >= 2");
  if (!(alpha > 0.0)) throw ValidationError(Reason::bad_argument, "alpha must be positive");
  const int d = n_nodes + (n_cliques - 1) * (n_nodes - 1);
  if (d < 2) throw ValidationError(Reason::too_small, "block model has fewer than 2 nodes");
  CounterRng rng(seed, stream::block_model);
  const Matrix p = centering_matrix(n_nodes);
  Matrix gamma = Matrix::Zero(d, d);
  Graph g(d);
  for (int c = 0; c < n_cliques; ++c) {
    const int start = c * (n_nodes - 1);
    Matrix block;
    int attempt = 0;
    for (; attempt < kMaxCliqueRetries; ++attempt) {
      const Matrix s = vine_correlation(n_nodes, alpha, rng);
      block = inverse_farris(p * s * p);
      try {
        validate_variogram(block);
        break;
      } catch (const ValidationError&) {
        logger()->debug("clique {} draw {} is not a valid variogram, redrawing", c + 1, attempt + 1);
      }
    }
    if (attempt == kMaxCliqueRetries) {
      throw ValidationError(Reason::not_conditionally_negative_definite,
                            "no valid clique variogram after " + std::to_string(kMaxCliqueRetries) + " draws");
    }
    for (int a = 0; a < n_nodes; ++a) {
      for (int b = a + 1; b < n_nodes; ++b) {
        gamma(start + a, start + b) = gamma(start + b, start + a) = block(a, b);
        g.add_edge(start + a, start + b);
      }
    }
    // Nodes of earlier cliques reach this clique through the separator `start`.
    for (int i = 0; i < start; ++i) {
      for (int b = 1; b < n_nodes; ++b) {
        const int j = start + b;
        gamma(i, j) = gamma(j, i) = gamma(i, start) + gamma(start, j);
      }
    }
  }
  VariogramMatrix valid = validate_variogram(gamma);
  HRPrecision theta = precision_from_gamma(valid);
  return HrModel{std::move(g), std::move(valid), std::move(theta)};
}

Matrix sample_mpd_hr(const VariogramMatrix& gamma, int n, std::uint64_t seed) {
  require_positive_n(n);
  const int d = gamma.dim();
  const auto factors = root_factors(gamma);
  Matrix out(n, d);
  for (int row = 0; row < n; ++row) {
    CounterRng rng(seed, stream::mpd_row, static_cast<std::uint64_t>(row));
    boost::random::uniform_int_distribution<int> root(0, d - 1);
    while (true) {
      const int m = root(rng);
      const double scale = 1.0 / open_uniform(rng);
      const Vector y = scale * draw_profile(factors[m], m, rng);
      const int exceed = static_cast<int>((y.array() > 1.0).count());
      // Root mixing oversamples y by the number of exceeding coordinates.
      if (exceed == 1 || open_uniform(rng) * exceed <= 1.0) {
        out.row(row) = y.transpose();
        break;
      }
    }
  }
  return out;
}

Matrix sample_maxstable_hr(const VariogramMatrix& gamma, int n, std::uint64_t seed) {
  require_positive_n(n);
  const int d = gamma.dim();
  const auto factors = root_factors(gamma);
  Matrix out(n, d);
  boost::random::exponential_distribution<double> exponential(1.0);
  for (int row = 0; row < n; ++row) {
    CounterRng rng(seed, stream::maxstable_row, static_cast<std::uint64_t>(row));
    Vector x = Vector::Zero(d);
    for (int j = 0; j < d; ++j) {
      double arrivals = exponential(rng);
      double zeta = 1.0 / arrivals;
      while (zeta > x(j)) {
        const Vector z = zeta * draw_profile(factors[j], j, rng);
        bool fresh = true;
        for (int i = 0; i < j && fresh; ++i) fresh = z(i) < x(i);
        if (fresh) x = x.cwiseMax(z);
        arrivals += exponential(rng);
        zeta = 1.0 / arrivals;
      }
    }
    out.row(row) = x.transpose();
  }
  return out;
}

}  // namespace hrgraph
