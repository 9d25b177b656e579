#include "dsca/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsca/rng.hpp"

namespace dsca {

ThroughputState ThroughputState::init(int num_users, double floor) {
  if (num_users <= 0)
    throw std::invalid_argument("throughput: need at least one user");
  if (floor <= 0.0)
    throw std::invalid_argument("throughput: floor must be positive");
  ThroughputState s;
  s.W = Eigen::VectorXd::Constant(num_users, floor);
  s.t = 0;
  s.floor = floor;
  return s;
}

Eigen::VectorXd scheduling_weights(const ThroughputState& s,
                                   const UtilityConfig& u) {
  if (u.c.size() != s.W.size())
    throw std::invalid_argument("weights: one QoS weight per user required");
  if (u.alpha > 1.0)
    throw std::invalid_argument("weights: alpha must be <= 1");
  Eigen::VectorXd w(s.W.size());
  for (int i = 0; i < w.size(); ++i)
    w(i) = u.c(i) * std::pow(s.W(i), u.alpha - 1.0);
  return w;
}

void update_throughput(ThroughputState& s, const Eigen::VectorXd& rates) {
  if (rates.size() != s.W.size())
    throw std::invalid_argument("throughput: rate vector size mismatch");
  if ((rates.array() < 0.0).any())
    throw std::invalid_argument("throughput: rates must be nonnegative");
  s.W = ((s.t * s.W + rates) / (s.t + 1.0)).cwiseMax(s.floor);
  s.t += 1;
}

double total_utility(const ThroughputState& s, const UtilityConfig& u) {
  if (u.c.size() != s.W.size())
    throw std::invalid_argument("utility: one QoS weight per user required");
  double total = 0.0;
  for (int i = 0; i < s.W.size(); ++i)
    total += u.alpha == 0.0 ? u.c(i) * std::log(s.W(i))
                            : u.c(i) / u.alpha * std::pow(s.W(i), u.alpha);
  return total;
}

HorizonResult run_horizon(const InstanceParams& ip, const AlgorithmConfig& cfg,
                          int T, const UtilityConfig& u, uint64_t master_seed) {
  if (T <= 0) throw std::invalid_argument("run_horizon: need T >= 1");
  if (u.c.size() != ip.num_users())
    throw std::invalid_argument("run_horizon: one QoS weight per user required");

  ThroughputState state = ThroughputState::init(ip.num_users());
  for (int t = 0; t < T; ++t) {
    ProblemInstance inst =
        sample_instance(ip.topo, ip.channels, ip.users_per_bs, ip.noise,
                        ip.budgets, ip.sig_scale, ip.intf_scale,
                        Rng::derive_seed(master_seed, static_cast<uint64_t>(t)));
    inst.set_weights(scheduling_weights(state, u));
    SolveResult res = run_one_shot(inst, cfg);
    update_throughput(state, realized_user_rates(inst, res.alloc));
  }

  HorizonResult out;
  out.throughput = state.W;
  out.utility = total_utility(state, u);
  out.slots = state.t;
  return out;
}

std::vector<std::pair<double, double>> export_cdf(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw std::invalid_argument("export_cdf: empty input");
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = static_cast<double>(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;  // step at last dup
    cdf.push_back({v[i], (i + 1) / n});
  }
  return cdf;
}

static double ecdf_at(const std::vector<double>& sorted, double x) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) -
                             sorted.begin()) /
         static_cast<double>(sorted.size());
}

bool cdf_weakly_dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          double tol) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("cdf_weakly_dominates: empty input");
  std::vector<double> sa(a.data(), a.data() + a.size());
  std::vector<double> sb(b.data(), b.data() + b.size());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  for (double x : sa)
    if (ecdf_at(sa, x) > ecdf_at(sb, x) + tol) return false;
  for (double x : sb)
    if (ecdf_at(sa, x) > ecdf_at(sb, x) + tol) return false;
  return true;
}

}  // namespace dsca
