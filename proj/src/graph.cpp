#include "hrgraph/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "hrgraph/errors.hpp"

namespace hrgraph {

Graph::Graph(int dim) : dim_(dim) {
  if (dim < 0) {
    throw ValidationError(ValidationError::Reason::bad_argument, "graph dimension must be non-negative");
  }
}

Graph::Graph(int dim, const std::vector<Edge>& edges) : Graph(dim) {
  for (const auto& e : edges) add_edge(e.lo, e.hi);
}

Graph Graph::from_adjacency(const Eigen::MatrixXi& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw ValidationError(ValidationError::Reason::not_square, "adjacency matrix must be square");
  }
  Graph g(static_cast<int>(adjacency.rows()));
  for (int i = 0; i < g.dim_; ++i) {
    for (int j = i + 1; j < g.dim_; ++j) {
      if (adjacency(i, j) != 0) g.edges_.emplace(i, j);
    }
  }
  return g;
}

void Graph::check_node(int i) const {
  if (i < 0 || i >= dim_) {
    throw ValidationError(ValidationError::Reason::bad_argument,
                          "node " + std::to_string(i) + " out of range for dimension " + std::to_string(dim_));
  }
}

void Graph::add_edge(int i, int j) {
  check_node(i);
  check_node(j);
  if (i == j) {
    throw ValidationError(ValidationError::Reason::bad_argument, "self-loops are not allowed");
  }
  edges_.emplace(i, j);
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  return edges_.count(Edge(i, j)) > 0;
}

int Graph::degree(int i) const {
  check_node(i);
  int deg = 0;
  for (const auto& e : edges_) {
    if (e.lo == i || e.hi == i) ++deg;
  }
  return deg;
}

int Graph::max_degree() const {
  std::vector<int> deg(dim_, 0);
  for (const auto& e : edges_) {
    ++deg[e.lo];
    ++deg[e.hi];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<int> Graph::neighbors(int i) const {
  check_node(i);
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.lo == i) out.push_back(e.hi);
    if (e.hi == i) out.push_back(e.lo);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Graph::density() const {
  if (dim_ < 2) return 0.0;
  const double pairs = 0.5 * dim_ * (dim_ - 1);
  return static_cast<double>(edges_.size()) / pairs;
}

Eigen::MatrixXi Graph::adjacency() const {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(dim_, dim_);
  for (const auto& e : edges_) {
    a(e.lo, e.hi) = 1;
    a(e.hi, e.lo) = 1;
  }
  return a;
}

bool is_connected(const Graph& g) {
  const int d = g.dim();
  if (d <= 1) return true;
  std::vector<std::vector<int>> adj(d);
  for (const auto& e : g.edges()) {
    adj[e.lo].push_back(e.hi);
    adj[e.hi].push_back(e.lo);
  }
  std::vector<bool> seen(d, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == d;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.dim()) {
    throw ValidationError(ValidationError::Reason::dimension_mismatch, "permutation size differs from graph dimension");
  }
  Graph out(g.dim());
  for (const auto& e : g.edges()) out.add_edge(perm[e.lo], perm[e.hi]);
  return out;
}

}  // namespace hrgraph
