#pragma once

// Random graphs, random Hüsler-Reiss parameters on a graph, and exact
// samplers for multivariate Pareto and max-stable HR vectors.

#include <cstdint>
#include <limits>

#include "hrgraph/graph.hpp"
#include "hrgraph/hr_model.hpp"

namespace hrgraph {

// Counter-based generator: output t of stream (seed, key) is
// mix64(base + t * golden) with base = mix64(mix64(seed + c1 * op) + c2 * (sub + 1)),
// mix64 being the SplitMix64 finalizer. Each (operation, index) pair gets its
// own stream, so a sample row or a replication can be regenerated on its own.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t op, std::uint64_t sub = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Stream identifiers. Row-wise samplers use the row index as `sub`.
namespace stream {
inline constexpr std::uint64_t barabasi_albert = 1;
inline constexpr std::uint64_t laplacian_weights = 2;
inline constexpr std::uint64_t block_model = 3;
inline constexpr std::uint64_t mpd_row = 4;
inline constexpr std::uint64_t maxstable_row = 5;
inline constexpr std::uint64_t task = 6;  // sub-seeds for experiment tasks
}  // namespace stream

// Deterministic sub-seed for task `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct HrModel {
  Graph graph;
  VariogramMatrix gamma;
  HRPrecision theta;
};

// Preferential attachment started from a q-clique on nodes 0..q-1. Each new
// node picks q distinct earlier nodes, sequentially, with probability
// proportional to current degree (uniformly when all remaining degrees are 0).
Graph barabasi_albert(int d, int q, std::uint64_t seed);

struct WeightRange {
  double low = 2.0;
  double high = 5.0;
};

// Theta = D - W with W_ij ~ U[low, high] drawn per edge in lexicographic order.
HrModel laplacian_gamma(const Graph& g, std::uint64_t seed, WeightRange range = {});

// Random correlation matrix from the C-vine construction; off-diagonal
// entries have marginal law 2 Beta(alpha - 1 + n/2, same) - 1.
Matrix vine_correlation(int n, double alpha, CounterRng& rng);

// Chain of n_cliques cliques of n_nodes nodes; clique j covers nodes
// j(n_nodes-1) .. j(n_nodes-1) + n_nodes - 1.
HrModel block_model_gamma(int n_cliques, int n_nodes, double alpha, std::uint64_t seed);

// Exact multivariate Pareto HR samples (n x d).
Matrix sample_mpd_hr(const VariogramMatrix& gamma, int n, std::uint64_t seed);

// Exact max-stable HR samples with standard Fréchet margins (n x d).
Matrix sample_maxstable_hr(const VariogramMatrix& gamma, int n, std::uint64_t seed);

}  // namespace hrgraph
