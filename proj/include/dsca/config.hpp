#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsca/algorithms.hpp"
#include "dsca/scheduler.hpp"

namespace dsca {

// One experiment: topology and channel statistics, schedules, the algorithms
// to compare, and the sweep over fairness levels and seeds.
struct ExperimentConfig {
  // [topology]
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;

  // [instance]
  int channels = 1;
  int users_per_bs = 1;
  double noise = 0.01;
  std::vector<double> budget;  // one value (uniform) or one per BS
  double sig_scale = 1.0;
  double intf_scale = 0.5;

  // [schedule]
  ScheduleSet schedule;

  // [algorithm]
  std::vector<AlgorithmTag> algorithms;
  StopCriteria stop;
  int sc_rounds = 10;
  double sc_tol = 1e-6;
  double cm_inner_floor = 1e-7;
  double cm_tau0 = 10.0;
  double init_power_frac = 0.01;

  // [experiment]
  std::vector<double> alphas;
  std::vector<uint64_t> seeds;
  int horizon = 200;
  double qos_weight = 1.0;
  std::string out_dir = "results";

  InstanceParams instance_params() const;
  AlgorithmConfig algorithm_config(AlgorithmTag tag) const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Flat sectioned key = value text. Unknown sections or keys are errors.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);
void serialize_config(const ExperimentConfig& cfg, std::ostream& os);

}  // namespace dsca
