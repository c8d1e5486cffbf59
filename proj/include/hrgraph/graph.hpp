#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace hrgraph {

// Undirected edge with endpoints stored as (lo, hi), 0-based.
struct Edge {
  int lo;
  int hi;

  Edge(int a, int b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
};

// Undirected simple graph on nodes {0, ..., dim-1}.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int dim);
  Graph(int dim, const std::vector<Edge>& edges);

  // Symmetric 0/1 matrix; only the strict upper triangle is read.
  static Graph from_adjacency(const Eigen::MatrixXi& adjacency);

  int dim() const { return dim_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::set<Edge>& edges() const { return edges_; }

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  int degree(int i) const;
  int max_degree() const;
  std::vector<int> neighbors(int i) const;

  // |E| / (d(d-1)/2); zero for d < 2.
  double density() const;

  Eigen::MatrixXi adjacency() const;

  bool operator==(const Graph&) const = default;

 private:
  void check_node(int i) const;

  int dim_ = 0;
  std::set<Edge> edges_;
};

bool is_connected(const Graph& g);

// Graph on the same nodes with labels permuted: edge {i,j} becomes
// {perm[i], perm[j]}.
Graph relabel(const Graph& g, const std::vector<int>& perm);

}  // namespace hrgraph
