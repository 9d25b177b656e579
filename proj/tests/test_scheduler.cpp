#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dsca/rng.hpp"
#include "dsca/scheduler.hpp"

using namespace dsca;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

InstanceParams two_cell_params() {
  return InstanceParams{InterferenceGraph({0, 1}, {{0, 1}}),
                        2,
                        2,
                        0.05,
                        Eigen::VectorXd::Constant(2, 5.0),
                        1.0,
                        0.5};
}

AlgorithmConfig sc_ni_cfg() {
  AlgorithmConfig cfg;
  cfg.tag = AlgorithmTag::SC_NI;
  cfg.sc_tol = 1e-8;
  return cfg;
}

}  // namespace

TEST_CASE("gradient scheduling weight examples") {
  ThroughputState s = ThroughputState::init(3);
  s.W = vec({1.0, 4.0, 2.0});

  UtilityConfig u;
  u.alpha = 1.0;
  u.c = vec({2.0, 3.0, 5.0});
  // alpha = 1: weights are just the QoS constants
  CHECK((scheduling_weights(s, u) - u.c).norm() == doctest::Approx(0.0));

  u.alpha = 0.5;
  u.c = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd w = scheduling_weights(s, u);
  CHECK(w(1) == doctest::Approx(0.5));  // 4^(-1/2)
  CHECK(w(0) == doctest::Approx(1.0));

  u.alpha = 0.0;
  w = scheduling_weights(s, u);
  CHECK(w(2) == doctest::Approx(0.5));  // 1/W

  u.alpha = 1.5;
  CHECK_THROWS(scheduling_weights(s, u));
}

TEST_CASE("throughput running average with floor") {
  ThroughputState s = ThroughputState::init(2);
  CHECK(s.t == 0);
  CHECK(s.W(0) == doctest::Approx(1e-3));

  s.W = vec({2.0, 2.0});
  s.t = 1;
  update_throughput(s, vec({4.0, 0.0}));
  CHECK(s.t == 2);
  CHECK(s.W(0) == doctest::Approx(3.0));  // (1*2 + 4)/2
  CHECK(s.W(1) == doctest::Approx(1.0));  // (1*2 + 0)/2

  // starved users decay toward the floor, never through it
  ThroughputState d = ThroughputState::init(1);
  d.W(0) = 1.0;
  d.t = 1;
  for (int i = 0; i < 20000; ++i) update_throughput(d, vec({0.0}));
  CHECK(d.W(0) == doctest::Approx(1e-3));
}

TEST_CASE("alpha-fair utility values") {
  ThroughputState s = ThroughputState::init(2);
  s.W = vec({4.0, 1.0});
  UtilityConfig u;
  u.c = Eigen::VectorXd::Ones(2);

  u.alpha = 1.0;
  CHECK(total_utility(s, u) == doctest::Approx(5.0));

  u.alpha = 0.5;
  CHECK(total_utility(s, u) == doctest::Approx(2.0 * 2.0 + 2.0 * 1.0));

  u.alpha = 0.0;
  CHECK(total_utility(s, u) == doctest::Approx(std::log(4.0)));

  u.c = vec({3.0, 1.0});
  u.alpha = 1.0;
  CHECK(total_utility(s, u) == doctest::Approx(13.0));
}

TEST_CASE("horizon bookkeeping: alpha = 1 utility equals summed throughput") {
  InstanceParams ip = two_cell_params();
  UtilityConfig u;
  u.alpha = 1.0;
  u.c = Eigen::VectorXd::Ones(ip.num_users());
  HorizonResult r = run_horizon(ip, sc_ni_cfg(), 10, u, 314);
  CHECK(r.slots == 10);
  CHECK(r.throughput.size() == ip.num_users());
  CHECK((r.throughput.array() > 0.0).all());
  CHECK(r.utility == doctest::Approx(r.throughput.sum()).epsilon(1e-10));
}

TEST_CASE("horizon runs are seed-deterministic") {
  InstanceParams ip = two_cell_params();
  UtilityConfig u;
  u.alpha = 0.5;
  u.c = Eigen::VectorXd::Ones(ip.num_users());
  HorizonResult a = run_horizon(ip, sc_ni_cfg(), 8, u, 99);
  HorizonResult b = run_horizon(ip, sc_ni_cfg(), 8, u, 99);
  HorizonResult c = run_horizon(ip, sc_ni_cfg(), 8, u, 100);
  CHECK((a.throughput - b.throughput).norm() == 0.0);
  CHECK(a.utility == b.utility);
  CHECK((a.throughput - c.throughput).norm() > 0.0);
}

TEST_CASE("a single slot reproduces the one-shot realized rates") {
  InstanceParams ip = two_cell_params();
  UtilityConfig u;
  u.alpha = 1.0;
  u.c = Eigen::VectorXd::Ones(ip.num_users());
  HorizonResult r = run_horizon(ip, sc_ni_cfg(), 1, u, 555);

  ProblemInstance inst =
      sample_instance(ip.topo, ip.channels, ip.users_per_bs, ip.noise,
                      ip.budgets, ip.sig_scale, ip.intf_scale,
                      Rng::derive_seed(555, 0));
  ThroughputState s = ThroughputState::init(ip.num_users());
  inst.set_weights(scheduling_weights(s, u));
  Allocation a = run_sc_ni(inst, 1e-8);
  Eigen::VectorXd rates = realized_user_rates(inst, a);
  CHECK((r.throughput - rates.cwiseMax(s.floor)).norm() < 1e-12);
}

TEST_CASE("empirical CDF export") {
  auto one = export_cdf(vec({1.0}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].first == 1.0);
  CHECK(one[0].second == 1.0);

  auto cdf = export_cdf(vec({2.0, 1.0, 4.0, 2.0}));
  REQUIRE(cdf.size() == 3);
  CHECK(cdf[0] == std::pair{1.0, 0.25});
  CHECK(cdf[1] == std::pair{2.0, 0.75});
  CHECK(cdf[2] == std::pair{4.0, 1.0});

  for (size_t i = 1; i < cdf.size(); ++i) {
    CHECK(cdf[i].first > cdf[i - 1].first);
    CHECK(cdf[i].second > cdf[i - 1].second);
  }
}

TEST_CASE("stochastic dominance predicate") {
  Eigen::VectorXd lo = vec({1.0, 2.0, 3.0});
  Eigen::VectorXd hi = vec({2.0, 3.0, 4.0});
  CHECK(cdf_weakly_dominates(hi, lo));
  CHECK_FALSE(cdf_weakly_dominates(lo, hi));
  // identical samples dominate weakly in both directions
  CHECK(cdf_weakly_dominates(lo, lo));
  // crossing CDFs dominate in neither
  Eigen::VectorXd cross = vec({0.5, 3.5, 3.5});
  CHECK_FALSE(cdf_weakly_dominates(cross, lo));
  CHECK_FALSE(cdf_weakly_dominates(lo, cross));
}
