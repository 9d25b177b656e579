#pragma once

#include <Eigen/Dense>
#include <string>

#include "dsca/problem.hpp"
#include "dsca/sca.hpp"
#include "dsca/schedule.hpp"

namespace dsca {

enum class AlgorithmTag { LXGP_RM, LXLP_RM, GXGP_CM, SC, SC_NI };

AlgorithmTag algorithm_from_string(const std::string& name);
std::string to_string(AlgorithmTag tag);

struct AlgorithmConfig {
  AlgorithmTag tag = AlgorithmTag::LXGP_RM;
  ScheduleSet schedule;         // tau0 carries the surrogate tau_b
  StopCriteria stop;
  int sc_rounds = 10;
  double sc_tol = 1e-6;         // single-cell inner tolerance
  double cm_inner_floor = 1e-7; // lower bound on the CM inner solve tolerance
  double cm_tau0 = 10.0;        // proximal weight for the CM surrogate
  double init_power_frac = 0.01;
};

struct SolveResult {
  Allocation alloc;
  TrajectoryRecord trajectory;
};

// One-shot solvers for a weighted sum-rate instance.
SolveResult run_lxgp_rm(const ProblemInstance& inst, const AlgorithmConfig& cfg);
SolveResult run_lxlp_rm(const ProblemInstance& inst, const AlgorithmConfig& cfg);
SolveResult run_gxgp_cm(const ProblemInstance& inst, const AlgorithmConfig& cfg);
Allocation run_sc_ni(const ProblemInstance& inst, double tol = 1e-6);
Allocation run_sc(const ProblemInstance& inst, int n_rounds, double tol = 1e-6);

// Dispatch on cfg.tag; baselines get a single-row trajectory.
SolveResult run_one_shot(const ProblemInstance& inst, const AlgorithmConfig& cfg);

// Interference-free single-cell problem: concave weighted sum-rate over one
// BS with per-(user,channel) effective noise. Alternating exact channel
// allocation and water-filling power steps, with a projected-gradient
// polish when alternation stalls.
void single_cell_solve(const Eigen::VectorXd& weights,
                       const Eigen::MatrixXd& signal_gain,
                       const Eigen::MatrixXd& eff_noise, double budget,
                       double tol, Eigen::VectorXd& p_out,
                       Eigen::MatrixXd& x_out);

}  // namespace dsca
