#include <cmath>
#include <random>

#include "doctest.h"
#include "hrgraph/diagnostics.hpp"
#include "hrgraph/errors.hpp"
#include "hrgraph/simulate.hpp"
#include "oracles.hpp"

using namespace hrgraph;

namespace {

HrModel chain_model() {
  const Matrix lap = oracle::laplacian(4, {{0, 1, 2.0}, {1, 2, 3.0}, {2, 3, 4.0}});
  HRPrecision theta = HRPrecision::from_matrix(lap);
  VariogramMatrix gamma = gamma_from_precision(theta);
  return HrModel{Graph(4, {{0, 1}, {1, 2}, {2, 3}}), std::move(gamma), std::move(theta)};
}

VariogramMatrix scaled(const VariogramMatrix& g, double c) { return validate_variogram(c * g.matrix()); }

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("spanning tree on three nodes") {
  Matrix g(3, 3);
  g << 0, 1.0, 3.0, 1.0, 0, 2.0, 3.0, 2.0, 0;
  CHECK(extremal_mst(g) == Graph(3, {{0, 1}, {1, 2}}));
}

TEST_CASE("spanning tree recovers a tree model exactly") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const HrModel m = laplacian_gamma(barabasi_albert(15, 1, seed), seed);
    const Graph t = extremal_mst(m.gamma.matrix());
    CHECK(t.num_edges() == 14);
    CHECK(is_connected(t));
    CHECK(t == m.graph);
  }
}

TEST_CASE("F-score examples") {
  const Graph truth(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(f_score(truth, truth) == 1.0);
  // tp 2, fp 1, fn 1.
  CHECK(f_score(truth, Graph(4, {{0, 1}, {1, 2}, {0, 3}})) == doctest::Approx(2.0 / 3.0));
  CHECK(f_score(truth, Graph(4)) == 0.0);
  CHECK(f_score(Graph(4), Graph(4)) == 1.0);
  const auto c = confusion(truth, Graph(4, {{0, 1}, {0, 2}}));
  CHECK(c.true_positives == 1);
  CHECK(c.false_positives == 1);
  CHECK(c.false_negatives == 2);
  CHECK_THROWS_AS(f_score(truth, Graph(5)), ValidationError);
}

TEST_CASE("operator norm") {
  Matrix m(2, 3);
  m << 1, -2, 3, -4, 0, 0.5;
  CHECK(op_norm_inf(m) == doctest::Approx(6.0));
  CHECK(op_norm_inf(Matrix(0, 0)) == 0.0);
}

TEST_CASE("neighborhood incoherence of one regression by hand") {
  const HrModel m = chain_model();
  const auto diag = ns_diagnostics(m.gamma, m.graph);
  // Root 0, regression of node 3: S = {2}, complement {1}.
  const Matrix sigma = oracle::farris(m.gamma.matrix(), 0);
  const double expected = 1.0 - std::abs(sigma(1, 2)) / sigma(2, 2);
  bool found = false;
  for (const auto& p : diag.pairs) {
    if (p.root == 0 && p.ell == 3) {
      found = true;
      CHECK(p.eta == doctest::Approx(expected));
      CHECK(p.lambda == doctest::Approx(sigma(2, 2)));
      CHECK(p.vartheta == doctest::Approx(1.0 / sigma(2, 2)));
      CHECK(p.kappa == doctest::Approx(std::abs(sigma(1, 2))));
    }
  }
  CHECK(found);
  CHECK(diag.s == 2);
  // theta_min = min |Theta_ij| / Theta_jj over edges and both orientations.
  const Matrix& t = m.theta.matrix();
  double tmin = 1e300;
  for (const auto& e : m.graph.edges()) {
    tmin = std::min({tmin, -t(e.lo, e.hi) / t(e.lo, e.lo), -t(e.lo, e.hi) / t(e.hi, e.hi)});
  }
  CHECK(diag.theta_min == doctest::Approx(tmin));
}

TEST_CASE("Laplacian models have non-positive neighborhood incoherence") {
  for (std::uint64_t seed : {4, 5, 6}) {
    const HrModel m = laplacian_gamma(barabasi_albert(10, 2, seed), seed);
    CHECK(ns_diagnostics(m.gamma, m.graph).eta <= 1e-9);
  }
}

TEST_CASE("incoherence is unchanged by rescaling the variogram") {
  const HrModel m = laplacian_gamma(barabasi_albert(8, 2, 11), 11);
  const auto base_ns = ns_diagnostics(m.gamma, m.graph);
  const auto base_gl = gl_diagnostics(m.gamma, m.graph);
  for (double c : {0.5, 2.0}) {
    const auto g = scaled(m.gamma, c);
    CHECK(ns_diagnostics(g, m.graph).eta == doctest::Approx(base_ns.eta));
    CHECK(gl_diagnostics(g, m.graph).eta == doctest::Approx(base_gl.eta));
    CHECK(ns_diagnostics(g, m.graph).theta_min == doctest::Approx(base_ns.theta_min));
  }
}

TEST_CASE("scalar diagnostics are invariant to node relabelling") {
  const HrModel m = laplacian_gamma(barabasi_albert(8, 2, 13), 13);
  const std::vector<int> perm{5, 2, 7, 0, 6, 1, 3, 4};
  Matrix pg(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) pg(perm[i], perm[j]) = m.gamma(i, j);
  }
  const auto g = validate_variogram(pg);
  const Graph pgraph = relabel(m.graph, perm);
  const auto a = ns_diagnostics(m.gamma, m.graph);
  const auto b = ns_diagnostics(g, pgraph);
  CHECK(a.eta == doctest::Approx(b.eta));
  CHECK(a.lambda == doctest::Approx(b.lambda));
  CHECK(a.kappa == doctest::Approx(b.kappa));
  CHECK(a.vartheta == doctest::Approx(b.vartheta));
  const auto ga = gl_diagnostics(m.gamma, m.graph);
  const auto gb = gl_diagnostics(g, pgraph);
  CHECK(ga.eta == doctest::Approx(gb.eta));
  CHECK(ga.kappa_omega == doctest::Approx(gb.kappa_omega));
}

TEST_CASE("graphical-lasso incoherence against an explicit Kronecker product") {
  const HrModel m = chain_model();
  const auto diag = gl_diagnostics(m.gamma, m.graph);
  REQUIRE(diag.eta_per_root.size() == 4);
  double kappa_sigma = 0.0;
  for (int root = 0; root < 4; ++root) {
    const Matrix full = oracle::farris(m.gamma.matrix(), root);
    kappa_sigma = std::max(kappa_sigma, full.cwiseAbs().rowwise().sum().maxCoeff());
    const Matrix s = oracle::without(full, root);
    Matrix omega(9, 9);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          for (int e = 0; e < 3; ++e) omega(3 * a + b, 3 * c + e) = s(a, c) * s(b, e);
        }
      }
    }
    std::vector<int> in_s;
    std::vector<int> in_c;
    auto node = [root](int a) { return a < root ? a : a + 1; };
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const bool member = a == b || m.graph.has_edge(node(a), node(b));
        (member ? in_s : in_c).push_back(3 * a + b);
      }
    }
    Matrix oss(in_s.size(), in_s.size());
    Matrix ocs(in_c.size(), in_s.size());
    for (std::size_t r = 0; r < in_s.size(); ++r) {
      for (std::size_t c = 0; c < in_s.size(); ++c) oss(r, c) = omega(in_s[r], in_s[c]);
    }
    for (std::size_t r = 0; r < in_c.size(); ++r) {
      for (std::size_t c = 0; c < in_s.size(); ++c) ocs(r, c) = omega(in_c[r], in_s[c]);
    }
    const Matrix prod = ocs * oss.inverse();
    const double eta = 1.0 - prod.cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(diag.eta_per_root[root] == doctest::Approx(eta));
  }
  CHECK(diag.kappa_sigma == doctest::Approx(kappa_sigma));
  for (int root = 0; root < 4; ++root) {
    CHECK(diag.kappa_sigma >= oracle::farris(m.gamma.matrix(), root).diagonal().maxCoeff());
  }
}

TEST_CASE("sign structure of the precision") {
  const HrModel m = laplacian_gamma(barabasi_albert(12, 2, 17), 17);
  CHECK(emtp2_check(m.theta));
  CHECK(positive_offdiag_fraction(m.theta) == 0.0);
  Matrix t = Matrix::Zero(3, 3);
  t << 1, 0.5, -1.5, 0.5, 1, -1.5, -1.5, -1.5, 3;
  const auto theta = HRPrecision::from_matrix(t);
  CHECK_FALSE(emtp2_check(theta));
  CHECK(positive_offdiag_fraction(theta) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("diagnostics reject a graph that does not match the precision") {
  const HrModel m = chain_model();
  CHECK_THROWS_AS(ns_diagnostics(m.gamma, Graph(4, {{0, 1}, {1, 2}})), ValidationError);
  CHECK_THROWS_AS(gl_diagnostics(m.gamma, Graph(5)), ValidationError);
}

TEST_CASE("recovery radius is reported only with penalty bounds") {
  const HrModel m = chain_model();
  CHECK_FALSE(ns_diagnostics(m.gamma, m.graph).recovery_radius.has_value());
  CHECK_FALSE(gl_diagnostics(m.gamma, m.graph).recovery_radius.has_value());
  const PenaltyBounds b{0.01, 0.02};
  CHECK(ns_diagnostics(m.gamma, m.graph, b).recovery_radius.has_value());
  CHECK(gl_diagnostics(m.gamma, m.graph, b).recovery_radius.has_value());
}

TEST_SUITE_END();
