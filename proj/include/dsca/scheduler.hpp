#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "dsca/algorithms.hpp"
#include "dsca/graph.hpp"
#include "dsca/problem.hpp"

namespace dsca {

// Everything needed to draw a fresh channel realization each slot.
struct InstanceParams {
  InterferenceGraph topo;
  int channels = 1;
  int users_per_bs = 1;
  double noise = 0.01;
  Eigen::VectorXd budgets;
  double sig_scale = 1.0;
  double intf_scale = 0.5;

  int num_users() const { return topo.num_nodes() * users_per_bs; }
};

// Alpha-fair utility: U_i(W) = c_i/alpha * W^alpha, with the log branch at
// alpha = 0.
struct UtilityConfig {
  double alpha = 1.0;
  Eigen::VectorXd c;  // per-user QoS weight, > 0
};

// Average throughput per user with a positive floor so the gradient
// scheduling weights W^(alpha-1) stay finite for alpha < 1.
struct ThroughputState {
  Eigen::VectorXd W;
  int t = 0;
  double floor = 1e-3;

  static ThroughputState init(int num_users, double floor = 1e-3);
};

// Gradient scheduling weights w_i = c_i * W_i^(alpha-1).
Eigen::VectorXd scheduling_weights(const ThroughputState& s,
                                   const UtilityConfig& u);

// Running average W <- (t W + r) / (t+1), floored; increments t.
void update_throughput(ThroughputState& s, const Eigen::VectorXd& rates);

double total_utility(const ThroughputState& s, const UtilityConfig& u);

struct HorizonResult {
  Eigen::VectorXd throughput;
  double utility = 0.0;
  int slots = 0;
};

// T slots of: sample gains (per-slot derived seed), set weights from the
// current throughputs, one-shot solve, accumulate realized rates.
HorizonResult run_horizon(const InstanceParams& ip, const AlgorithmConfig& cfg,
                          int T, const UtilityConfig& u, uint64_t master_seed);

// Empirical CDF steps at the sorted distinct sample values.
std::vector<std::pair<double, double>> export_cdf(const Eigen::VectorXd& values);

// True when A's empirical CDF lies weakly to the right of B's at every
// sample point of either (A stochastically dominates B).
bool cdf_weakly_dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          double tol = 1e-12);

}  // namespace dsca
