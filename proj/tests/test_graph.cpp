#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dsca/graph.hpp"

using namespace dsca;

namespace {

InterferenceGraph four_cycle() {
  return InterferenceGraph({1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
}

InterferenceGraph four_star() {
  // node 1 is the center
  return InterferenceGraph({1, 2, 3, 4}, {{1, 2}, {1, 3}, {1, 4}});
}

}  // namespace

TEST_CASE("graph construction and neighborhoods") {
  InterferenceGraph g = four_cycle();
  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 4);
  for (int b : g.nodes()) CHECK(g.degree(b) == 2);
  CHECK(g.closed_neighborhood(1) == std::vector<int>{1, 2, 4});

  InterferenceGraph single({1}, {});
  CHECK(single.num_nodes() == 1);
  CHECK(single.neighbors(1).empty());
  CHECK(single.closed_neighborhood(1) == std::vector<int>{1});

  InterferenceGraph path({1, 2, 3}, {{1, 2}, {2, 3}});
  CHECK(path.closed_neighborhood(2) == std::vector<int>{1, 2, 3});
}

TEST_CASE("graph rejects self-loops, unknown endpoints, disconnection") {
  CHECK_THROWS(InterferenceGraph({1, 2}, {{1, 1}, {1, 2}}));
  CHECK_THROWS(InterferenceGraph({1, 2}, {{1, 3}}));
  CHECK_THROWS(InterferenceGraph({1, 2, 3}, {{1, 2}}));
  // duplicate edges are deduplicated, including reversed ones
  InterferenceGraph g({1, 2}, {{1, 2}, {2, 1}, {1, 2}});
  CHECK(g.num_edges() == 1);
}

TEST_CASE("mixing matrix on the 4-cycle: uniform edge weights") {
  MixingMatrix W = build_mixing_matrix(four_cycle());
  REQUIRE(W.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(W.weights(i, i) == doctest::Approx(0.5));
  CHECK(W.weights(0, 1) == doctest::Approx(0.25));
  CHECK(W.weights(0, 3) == doctest::Approx(0.25));
  CHECK(W.weights(0, 2) == 0.0);  // diagonal pair, not adjacent
  CHECK(W.weights(1, 3) == 0.0);
  CHECK(W.theta == doctest::Approx(0.25));
  CHECK((W.weights - W.weights.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mixing matrix singleton") {
  MixingMatrix W = build_mixing_matrix(InterferenceGraph({1}, {}));
  REQUIRE(W.size() == 1);
  CHECK(W.weights(0, 0) == 1.0);
}

TEST_CASE("mixing matrix star fallback avoids zero diagonal") {
  // center degree 3 equals |E| = 3, so the plain rule would zero its
  // diagonal; the fallback uses denominator |E|+1 = 4.
  MixingMatrix W = build_mixing_matrix(four_star());
  int c = W.index_of(1);
  CHECK(W.weights(c, c) == doctest::Approx(0.25));
  for (int leaf : {2, 3, 4}) {
    int l = W.index_of(leaf);
    CHECK(W.weights(l, l) == doctest::Approx(0.75));
    CHECK(W.weights(c, l) == doctest::Approx(0.25));
  }
  StochasticityReport rep =
      validate_doubly_stochastic(W, four_star(), 1e-12);
  CHECK(rep.pass);
}

TEST_CASE("local mixing matrix on the closed neighborhood") {
  InterferenceGraph g = four_cycle();
  MixingMatrix W = build_local_mixing_matrix(g, 1);
  CHECK(W.support == std::vector<int>{1, 2, 4});
  // induced edges among {1,2,4}: (1,2) and (1,4) -> a path with |E| = 2;
  // the center degree equals |E|, so the |E|+1 = 3 denominator applies
  int i1 = W.index_of(1), i2 = W.index_of(2), i4 = W.index_of(4);
  CHECK(W.weights(i1, i1) == doctest::Approx(1.0 / 3));
  CHECK(W.weights(i1, i2) == doctest::Approx(1.0 / 3));
  CHECK(W.weights(i1, i4) == doctest::Approx(1.0 / 3));
  CHECK(W.weights(i2, i2) == doctest::Approx(2.0 / 3));
  CHECK(W.weights(i2, i4) == 0.0);
  CHECK(validate_doubly_stochastic(W, g.induced_subgraph({1, 2, 4}), 1e-12).pass);

  // complete graph K3: local support is everything, uniform 1/3 weights
  InterferenceGraph k3({1, 2, 3}, {{1, 2}, {1, 3}, {2, 3}});
  MixingMatrix W3 = build_local_mixing_matrix(k3, 1);
  CHECK(W3.support == std::vector<int>{1, 2, 3});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(W3.weights(r, c) == doctest::Approx(1.0 / 3.0));

  CHECK(build_local_mixing_matrix(InterferenceGraph({1}, {}), 1).size() == 1);
}

TEST_CASE("local mixing support equals the closed neighborhood") {
  InterferenceGraph g({0, 1, 2, 3, 4},
                      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}});
  for (int b : g.nodes())
    CHECK(build_local_mixing_matrix(g, b).support == g.closed_neighborhood(b));
}

TEST_CASE("stochasticity validation catches constructed violations") {
  InterferenceGraph g = four_cycle();
  MixingMatrix W = build_mixing_matrix(g);
  CHECK(validate_doubly_stochastic(W, g, 1e-12).pass);

  MixingMatrix bad_row = W;
  bad_row.weights.row(0) *= 1.01;
  StochasticityReport rep = validate_doubly_stochastic(bad_row, g, 1e-12);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_row_error == doctest::Approx(0.01));

  MixingMatrix bad_support = W;
  bad_support.weights(0, 2) = 0.1;  // entry on a non-edge
  rep = validate_doubly_stochastic(bad_support, g, 1e-2);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.support_mismatches.empty());
}

TEST_CASE("consensus decay follows the second-largest eigenvalue") {
  MixingMatrix W = build_mixing_matrix(four_cycle());
  auto d = consensus_decay_probe(W, 30);
  REQUIRE(d.size() == 30);
  for (size_t n = 1; n < d.size(); ++n) CHECK(d[n] < d[n - 1] + 1e-15);

  // oracle: modulus of the second-largest eigenvalue of W
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W.weights);
  Eigen::VectorXd abs_ev = es.eigenvalues().cwiseAbs();
  std::sort(abs_ev.data(), abs_ev.data() + abs_ev.size());
  double rho = abs_ev(abs_ev.size() - 2);
  CHECK(d[10] / d[9] == doctest::Approx(rho).epsilon(1e-6));
  CHECK(rho < 1.0);

  // geometric envelope d[n] <= d[1] * r^(n-1) for the fitted ratio
  double r = std::pow(d[29] / d[0], 1.0 / 29.0);
  CHECK(r < 1.0);
  for (size_t n = 0; n < d.size(); ++n)
    CHECK(d[n] <= d[0] * std::pow(r, static_cast<double>(n)) * (1.0 + 1e-9));
}

TEST_CASE("consensus decay probe on a singleton is identically zero") {
  auto d = consensus_decay_probe(build_mixing_matrix(InterferenceGraph({1}, {})), 5);
  for (double v : d) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("identity weights on two nodes show no decay (negative control)") {
  MixingMatrix W;
  W.support = {0, 1};
  W.weights = Eigen::MatrixXd::Identity(2, 2);
  W.theta = 1.0;
  auto d = consensus_decay_probe(W, 10);
  for (double v : d) CHECK(v == doctest::Approx(d[0]));
  CHECK(d[0] > 0.0);
}

TEST_CASE("every accepted graph yields a valid symmetric mixing matrix") {
  std::vector<InterferenceGraph> graphs = {
      four_cycle(), four_star(),
      InterferenceGraph({1, 2}, {{1, 2}}),
      InterferenceGraph({0, 1, 2, 3, 4},
                        {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}}),
      InterferenceGraph({1, 2, 3}, {{1, 2}, {1, 3}, {2, 3}})};
  for (const auto& g : graphs) {
    MixingMatrix W = build_mixing_matrix(g);
    CHECK(validate_doubly_stochastic(W, g, 1e-12).pass);
    CHECK((W.weights - W.weights.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(W.theta > 0.0);
  }
}
