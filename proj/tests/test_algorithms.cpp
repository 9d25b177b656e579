#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dsca/algorithms.hpp"
#include "dsca/problem.hpp"
#include "dsca/rng.hpp"

using namespace dsca;

namespace {

InterferenceGraph triangle() {
  return InterferenceGraph({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}});
}

ProblemInstance triangle_instance(double intf_scale = 0.5, uint64_t seed = 42) {
  Eigen::VectorXd budgets = Eigen::VectorXd::Constant(3, 5.0);
  return sample_instance(triangle(), 2, 2, 0.1, budgets, 1.0, intf_scale, seed);
}

ProblemInstance single_bs_instance(uint64_t seed = 9) {
  Eigen::VectorXd budgets = Eigen::VectorXd::Constant(1, 5.0);
  return sample_instance(InterferenceGraph({0}, {}), 3, 3, 0.1, budgets, 1.0,
                         0.5, seed);
}

AlgorithmConfig rm_cfg(AlgorithmTag tag, int iters) {
  AlgorithmConfig cfg;
  cfg.tag = tag;
  cfg.schedule.alpha0 = 0.99;
  cfg.schedule.beta = 0.53;
  cfg.schedule.tau0 = 0.001;
  cfg.stop.max_iters = iters;
  return cfg;
}

AlgorithmConfig cm_cfg(int iters) {
  AlgorithmConfig cfg = rm_cfg(AlgorithmTag::GXGP_CM, iters);
  cfg.schedule.eps0 = 20.0;
  cfg.schedule.gamma = 0.51;
  cfg.cm_inner_floor = 1e-3;
  cfg.cm_tau0 = 10.0;
  return cfg;
}

// Value of the interference-free cell objective.
double cell_value(const Eigen::VectorXd& w, const Eigen::MatrixXd& g,
                  const Eigen::MatrixXd& nz, const Eigen::VectorXd& p,
                  const Eigen::MatrixXd& x) {
  double v = 0.0;
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k)
      if (x(i, k) > 0.0)
        v += w(i) * x(i, k) * std::log1p(p(k) * g(i, k) / (nz(i, k) * x(i, k)));
  return v;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (auto tag : {AlgorithmTag::LXGP_RM, AlgorithmTag::LXLP_RM,
                   AlgorithmTag::GXGP_CM, AlgorithmTag::SC, AlgorithmTag::SC_NI})
    CHECK(algorithm_from_string(to_string(tag)) == tag);
  CHECK(algorithm_from_string("lxgp-rm") == AlgorithmTag::LXGP_RM);
  CHECK(algorithm_from_string("sc-ni") == AlgorithmTag::SC_NI);
  CHECK_THROWS(algorithm_from_string("nope"));
}

TEST_CASE("single cell: one user and one channel takes everything") {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(1, 1.0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(1, 1, 2.0);
  Eigen::MatrixXd nz = Eigen::MatrixXd::Constant(1, 1, 1.0);
  Eigen::VectorXd p;
  Eigen::MatrixXd x;
  single_cell_solve(w, g, nz, 10.0, 1e-9, p, x);
  CHECK(p(0) == doctest::Approx(10.0));
  CHECK(x(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("single cell: symmetric channels split the budget evenly") {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(1, 1.0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(1, 2, 1.5);
  Eigen::MatrixXd nz = Eigen::MatrixXd::Constant(1, 2, 0.7);
  Eigen::VectorXd p;
  Eigen::MatrixXd x;
  single_cell_solve(w, g, nz, 6.0, 1e-9, p, x);
  CHECK(p(0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(p(1) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(x(0, 0) == doctest::Approx(1.0));
  CHECK(x(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("single cell: solver matches an exhaustive grid on 2 users x 2 channels") {
  Eigen::VectorXd w(2);
  w << 1.0, 2.0;
  Eigen::MatrixXd g(2, 2), nz = Eigen::MatrixXd::Ones(2, 2);
  g << 1.0, 0.4, 0.5, 1.2;
  const double P = 4.0;

  // channel-separable share search for each power split on the budget face
  double best = 0.0;
  for (int ip = 0; ip <= 100; ++ip) {
    Eigen::VectorXd p(2);
    p << P * ip / 100.0, P * (100 - ip) / 100.0;
    double v = 0.0;
    for (int k = 0; k < 2; ++k) {
      double bk = 0.0;
      for (int i1 = 0; i1 <= 20; ++i1)
        for (int i2 = 0; i2 + i1 <= 20; ++i2) {
          Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2);
          x(0, k) = i1 / 20.0;
          x(1, k) = i2 / 20.0;
          bk = std::max(bk, cell_value(w, g, nz, p, x));
        }
      v += bk;
    }
    best = std::max(best, v);
  }

  Eigen::VectorXd p;
  Eigen::MatrixXd x;
  single_cell_solve(w, g, nz, P, 1e-9, p, x);
  double got = cell_value(w, g, nz, p, x);
  CHECK(got == doctest::Approx(best).epsilon(1e-2));
  CHECK(got >= best - 1e-6);  // grid is a restriction of the feasible set
  CHECK(p.sum() <= P + 1e-9);
  for (int k = 0; k < 2; ++k) CHECK(x.col(k).sum() <= 1.0 + 1e-9);
}

TEST_CASE("single cell input validation") {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(2);
  Eigen::MatrixXd g = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd nz = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd p;
  Eigen::MatrixXd x;
  CHECK_THROWS(single_cell_solve(w, g, nz, 1.0, 1e-6, p, x));  // shape
  Eigen::VectorXd w1 = Eigen::VectorXd::Ones(1);
  CHECK_THROWS(single_cell_solve(w1, g, nz, 0.0, 1e-6, p, x));  // budget
  Eigen::MatrixXd nz0 = Eigen::MatrixXd::Zero(1, 1);
  CHECK_THROWS(single_cell_solve(w1, g, nz0, 1.0, 1e-6, p, x));  // noise
}

TEST_CASE("zero cross gains make the coordinated and naive baselines agree") {
  // hand-built triangle network whose interference links all have zero gain
  Rng rng(71);
  std::vector<UserLink> users;
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 2; ++i) {
      UserLink ul;
      ul.serving_bs = b;
      ul.signal_gain = Eigen::VectorXd::NullaryExpr(
          2, [&](Eigen::Index) { return rng.next_rayleigh(1.0); });
      for (int nb = 0; nb < 3; ++nb)
        if (nb != b)
          ul.interference_gain.push_back({nb, Eigen::VectorXd::Zero(2)});
      users.push_back(ul);
    }
  ProblemInstance inst(triangle(), 2, users, Eigen::VectorXd::Constant(3, 5.0),
                       0.1);
  Allocation ni = run_sc_ni(inst, 1e-8);
  Allocation sc = run_sc(inst, 10, 1e-8);
  CHECK((sc.p - ni.p).cwiseAbs().maxCoeff() < 1e-12);
  for (int b = 0; b < 3; ++b)
    CHECK((sc.x[b] - ni.x[b]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("consensus variants coincide on a complete graph") {
  ProblemInstance inst = triangle_instance();
  AlgorithmConfig cfg = rm_cfg(AlgorithmTag::LXGP_RM, 200);
  SolveResult a = run_lxgp_rm(inst, cfg);
  SolveResult b = run_lxlp_rm(inst, cfg);
  CHECK((a.alloc.p - b.alloc.p).cwiseAbs().maxCoeff() < 1e-8);
  for (int bs = 0; bs < 3; ++bs)
    CHECK((a.alloc.x[bs] - b.alloc.x[bs]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("one-BS network: consensus solvers reach the water-filling optimum") {
  // Unit weights and no interference make the optimum explicit: each channel
  // goes entirely to its best user and the power water-fills across the
  // resulting channel gains.
  ProblemInstance inst = single_bs_instance();
  const int K = inst.num_channels();
  Eigen::VectorXd c(K);
  for (int k = 0; k < K; ++k) {
    double g = 0.0;
    for (int u = 0; u < inst.num_users(); ++u) g = std::max(g, inst.gain(0, u, k));
    c(k) = g / inst.noise();
  }
  const double P = inst.power_budget(0);
  auto powers_at = [&](double mu) {
    return (Eigen::VectorXd::Constant(K, mu) - c.cwiseInverse())
        .cwiseMax(0.0)
        .eval();
  };
  double lo = 0.0, hi = P + c.cwiseInverse().maxCoeff();
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (powers_at(mid).sum() < P ? lo : hi) = mid;
  }
  Eigen::VectorXd p_star = powers_at(0.5 * (lo + hi));
  double opt = (p_star.array() * c.array()).log1p().sum();

  SolveResult rm = run_lxgp_rm(inst, rm_cfg(AlgorithmTag::LXGP_RM, 3000));
  CHECK(weighted_sum_rate(inst, rm.alloc) == doctest::Approx(opt).epsilon(1e-3));

  // The decomposed split models time sharing (power concentrated into the
  // active fraction), i.e. the same concave cell problem the single-cell
  // baseline solves; with one BS the two must agree.
  SolveResult cm = run_gxgp_cm(inst, cm_cfg(3000));
  double ni = weighted_sum_rate(inst, run_sc_ni(inst, 1e-9));
  CHECK(weighted_sum_rate(inst, cm.alloc) == doctest::Approx(ni).epsilon(1e-3));
}

TEST_CASE("symmetric two-cell network yields a symmetric allocation") {
  InterferenceGraph g({0, 1}, {{0, 1}});
  std::vector<UserLink> users(2);
  for (int u = 0; u < 2; ++u) {
    users[u].serving_bs = u;
    users[u].weight = 1.0;
    users[u].signal_gain = Eigen::VectorXd::Constant(1, 1.0);
    users[u].interference_gain = {{1 - u, Eigen::VectorXd::Constant(1, 0.3)}};
  }
  ProblemInstance inst(g, 1, users, Eigen::VectorXd::Constant(2, 4.0), 0.1);

  SolveResult r = run_lxgp_rm(inst, rm_cfg(AlgorithmTag::LXGP_RM, 500));
  CHECK(r.alloc.p(0, 0) == doctest::Approx(r.alloc.p(1, 0)).epsilon(1e-9));
  CHECK(r.alloc.x[0](0, 0) == doctest::Approx(r.alloc.x[1](0, 0)).epsilon(1e-9));
}

TEST_CASE("every algorithm returns a feasible allocation") {
  ProblemInstance inst = triangle_instance();
  for (auto tag : {AlgorithmTag::LXGP_RM, AlgorithmTag::LXLP_RM,
                   AlgorithmTag::GXGP_CM, AlgorithmTag::SC, AlgorithmTag::SC_NI}) {
    AlgorithmConfig cfg =
        tag == AlgorithmTag::GXGP_CM ? cm_cfg(100) : rm_cfg(tag, 100);
    SolveResult r = run_one_shot(inst, cfg);
    CHECK(r.alloc.feasible(inst));
    REQUIRE(!r.trajectory.rows.empty());
  }
}

TEST_CASE("consensus trajectories improve the objective overall") {
  ProblemInstance inst = triangle_instance();
  for (auto tag : {AlgorithmTag::LXGP_RM, AlgorithmTag::LXLP_RM}) {
    SolveResult r = run_one_shot(inst, rm_cfg(tag, 300));
    const auto& rows = r.trajectory.rows;
    double first = rows.front().objective, last = rows.back().objective;
    double lowest = first;
    for (const auto& row : rows) lowest = std::min(lowest, row.objective);
    CHECK(last < first);                   // minimization makes progress
    CHECK(last <= lowest + 0.01 * std::abs(lowest));  // and does not blow up late
  }
}

TEST_CASE("solvers are deterministic") {
  ProblemInstance inst = triangle_instance();
  SolveResult a = run_lxgp_rm(inst, rm_cfg(AlgorithmTag::LXGP_RM, 150));
  SolveResult b = run_lxgp_rm(inst, rm_cfg(AlgorithmTag::LXGP_RM, 150));
  CHECK((a.alloc.p - b.alloc.p).norm() == 0.0);
  for (int bs = 0; bs < 3; ++bs)
    CHECK((a.alloc.x[bs] - b.alloc.x[bs]).norm() == 0.0);

  Allocation s1 = run_sc(inst, 10, 1e-8), s2 = run_sc(inst, 10, 1e-8);
  CHECK((s1.p - s2.p).norm() == 0.0);
}
