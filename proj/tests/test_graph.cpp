#include "doctest.h"
#include "hrgraph/errors.hpp"
#include "hrgraph/graph.hpp"

using namespace hrgraph;

TEST_SUITE_BEGIN("graph");

TEST_CASE("edges are stored once, lowest endpoint first") {
  Graph g(4);
  g.add_edge(2, 1);
  g.add_edge(1, 2);
  g.add_edge(3, 0);
  CHECK(g.num_edges() == 2);
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 1));
  CHECK(g.edges().begin()->lo == 0);
  CHECK(g.degree(1) == 1);
  CHECK(g.max_degree() == 1);
  CHECK(g.neighbors(0) == std::vector<int>{3});
}

TEST_CASE("self loops and out-of-range nodes are rejected") {
  Graph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), ValidationError);
  CHECK_THROWS_AS(g.add_edge(0, 3), ValidationError);
  CHECK_THROWS_AS(g.add_edge(-1, 0), ValidationError);
}

TEST_CASE("density") {
  CHECK(Graph(1).density() == 0.0);
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(g.density() == doctest::Approx(0.5));
}

TEST_CASE("adjacency round trip") {
  Graph g(5, {{0, 4}, {1, 3}, {2, 3}});
  const auto a = g.adjacency();
  CHECK(a == a.transpose());
  CHECK(a.diagonal().sum() == 0);
  CHECK(Graph::from_adjacency(a) == g);
}

TEST_CASE("connectivity") {
  CHECK(is_connected(Graph(4, {{0, 1}, {1, 2}, {1, 3}})));
  CHECK_FALSE(is_connected(Graph(3)));
  CHECK_FALSE(is_connected(Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})));
  CHECK(is_connected(Graph(1)));
}

TEST_CASE("relabel moves edges with the permutation") {
  Graph g(3, {{0, 1}});
  const Graph h = relabel(g, {2, 0, 1});
  CHECK(h.has_edge(2, 0));
  CHECK(h.num_edges() == 1);
}

TEST_SUITE_END();
