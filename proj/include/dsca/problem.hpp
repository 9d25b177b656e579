#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsca/graph.hpp"

namespace dsca {

// Downlink data of one user: serving BS, scheduling weight, per-channel
// signal gains and per-neighbor interference gains. Gains from BSs outside
// the serving BS's closed neighborhood are neglected.
struct UserLink {
  int serving_bs = 0;  // BS index (position in the graph's node list)
  double weight = 1.0;
  Eigen::VectorXd signal_gain;  // length K
  std::vector<std::pair<int, Eigen::VectorXd>> interference_gain;  // (bs index, K gains)
};

// The data of the one-shot weighted sum-rate problem: interference graph,
// channels, fixed user association, gains, budgets, noise.
class ProblemInstance {
 public:
  ProblemInstance(InterferenceGraph graph, int num_channels,
                  std::vector<UserLink> users, Eigen::VectorXd power_budget,
                  double noise);

  const InterferenceGraph& graph() const { return graph_; }
  int num_bs() const { return graph_.num_nodes(); }
  int num_channels() const { return channels_; }
  int num_users() const { return static_cast<int>(users_.size()); }
  const UserLink& user(int u) const { return users_[u]; }
  const std::vector<int>& users_of(int bs) const { return users_of_[bs]; }
  double power_budget(int bs) const { return budget_(bs); }
  const Eigen::VectorXd& power_budgets() const { return budget_; }
  double noise() const { return noise_; }

  void set_weights(const Eigen::VectorXd& w);

  // Gain of the link from BS b to user u in channel k; zero when not stored
  // (b outside the closed neighborhood of the serving BS).
  double gain(int b, int u, int k) const;

  void save(std::ostream& os) const;
  static ProblemInstance load(std::istream& is);

 private:
  InterferenceGraph graph_;
  int channels_;
  std::vector<UserLink> users_;
  std::vector<std::vector<int>> users_of_;
  Eigen::VectorXd budget_;
  double noise_;
};

// Fresh gains for a scheduling slot: i.i.d. Rayleigh draws, deterministic in
// the seed. Signal links use sig_scale, interference links intf_scale.
ProblemInstance sample_instance(const InterferenceGraph& topo, int num_channels,
                                int users_per_bs, double noise,
                                const Eigen::VectorXd& budgets, double sig_scale,
                                double intf_scale, uint64_t seed);

// A feasible operating point: powers p (B x K) and fractional scheduling
// factors x (per BS, |I_b| x K).
struct Allocation {
  Eigen::MatrixXd p;
  std::vector<Eigen::MatrixXd> x;

  void clamp();  // zero out tiny negative entries for export
  bool feasible(const ProblemInstance& inst, double tol = 1e-9) const;
};

// One weighted rate summand w_i * x * log(1 + p g / (sigma^2 + interference)).
double rate_term(double weight, double x, double p, double signal_gain,
                 double noise_plus_interference);

// Realized per-user rates of an allocation under the true coupled model.
Eigen::VectorXd realized_user_rates(const ProblemInstance& inst,
                                    const Allocation& a);

// The coupled weighted sum-rate objective evaluated at an allocation.
double weighted_sum_rate(const ProblemInstance& inst, const Allocation& a);

// --- direct-method objective (f_b = minus BS b's weighted throughput) ----

struct RmEval {
  double value = 0.0;
  Eigen::MatrixXd dp;  // |scope| x K, rows follow the scope order
  Eigen::MatrixXd dx;  // |I_b| x K
};

// Value and analytic partials of f_b on a copy scope (all of B, or Nb(b)
// for the localized variant). p_copies rows follow `scope`; partials vanish
// for non-neighbor rows.
RmEval f_rm_value_and_grad(const ProblemInstance& inst, int b,
                           const std::vector<int>& scope,
                           const Eigen::MatrixXd& p_copies,
                           const Eigen::MatrixXd& x_b);

// Closed-form surrogate minimizer for the direct method: projection of
// current - (grad + pi)/tau, block-wise over budgets and channel simplices.
void surrogate_solve_rm(const ProblemInstance& inst, int b,
                        const std::vector<int>& scope,
                        const Eigen::MatrixXd& p_copies,
                        const Eigen::MatrixXd& x_b,
                        const Eigen::MatrixXd& pi_p, const Eigen::MatrixXd& pi_x,
                        double tau, Eigen::MatrixXd& p_out,
                        Eigen::MatrixXd& x_out);

// --- decomposed-method objective (concave part split into G) -------------

struct CmEval {
  double value = 0.0;
  Eigen::MatrixXd dp;                // B x K
  std::vector<Eigen::MatrixXd> dx;   // per BS, |I_b| x K (nonzero only for b)
};

// f_b of the decomposed split: + sum w x log(sigma^2 + interference).
// Needs global gains knowledge; copies are full (p over B, x over all BSs).
CmEval f_cm_value_and_grad(const ProblemInstance& inst, int b,
                           const Eigen::MatrixXd& p,
                           const std::vector<Eigen::MatrixXd>& x);

// Floor guarding the x log(a + b/x) terms of G near x = 0.
inline constexpr double kScheduleFloor = 1e-8;

struct GEval {
  double value = 0.0;
  Eigen::MatrixXd dp;
  std::vector<Eigen::MatrixXd> dx;
};

// The convex part G = -sum w x log(sigma^2 + (signal + interference)/x),
// extended by 0 at x = 0; partials below the floor are evaluated at the
// floored point.
GEval g_cm_value_and_grad(const ProblemInstance& inst, const Eigen::MatrixXd& p,
                          const std::vector<Eigen::MatrixXd>& x);

// Approximate minimizer of linearized-f_b + trackers + tau/2 prox + G over
// the feasible set, by projected gradient with backtracking. Stops when the
// strong-convexity bound certifies distance-to-minimizer <= inner_tol.
void surrogate_solve_cm(const ProblemInstance& inst, int b,
                        const Eigen::MatrixXd& p,
                        const std::vector<Eigen::MatrixXd>& x,
                        const Eigen::MatrixXd& pi_p,
                        const std::vector<Eigen::MatrixXd>& pi_x, double tau,
                        double inner_tol, Eigen::MatrixXd& p_out,
                        std::vector<Eigen::MatrixXd>& x_out);

// --- flattening helpers shared with the SCA block layout -----------------

// p as a vector: index b*K + k.
Eigen::VectorXd pack_p(const Eigen::MatrixXd& p);
Eigen::MatrixXd unpack_p(const Eigen::VectorXd& v, int num_bs, int num_channels);

// x as one vector: per-BS matrices concatenated row-major.
Eigen::VectorXd pack_x(const std::vector<Eigen::MatrixXd>& x);
std::vector<Eigen::MatrixXd> unpack_x(const Eigen::VectorXd& v,
                                      const ProblemInstance& inst);

}  // namespace dsca
