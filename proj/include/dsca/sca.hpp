#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dsca/graph.hpp"
#include "dsca/schedule.hpp"

namespace dsca {

using BlockVec = Eigen::VectorXd;
// A node's view of the decision variable: one vector per block it owns, in
// the order the blocks appear in the layout.
using NodePoint = std::vector<BlockVec>;

// Variable blocks and which nodes hold a copy of each. A block owned by a
// single node is private (trivial consensus); a block owned by every node
// is the common variable.
struct Block {
  std::string id;
  int dim = 0;
  std::vector<int> owners;  // node indices 0..I-1, sorted
};

class BlockLayout {
 public:
  BlockLayout(int num_nodes, std::vector<Block> blocks);

  int num_nodes() const { return num_nodes_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int m) const { return blocks_[m]; }
  int total_dim() const;

  // Blocks owned by a node, in layout order; the position of a block in
  // this list is the node's "slot" for it.
  const std::vector<int>& owned_blocks(int node) const { return owned_[node]; }
  // Slot of block m at node, or -1 if the node does not own it.
  int slot_of(int node, int m) const;
  bool owns(int node, int m) const { return slot_of(node, m) >= 0; }

 private:
  int num_nodes_;
  std::vector<Block> blocks_;
  std::vector<std::vector<int>> owned_;
};

// Per-node objective and feasible set, plus the surrogate subproblem
// solver. `iter` selects the iteration-n smoothed objective when envelope
// smoothing is active; oracles for plainly smooth objectives ignore it.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual double f_value(const NodePoint& x) const = 0;
  virtual BlockVec f_grad_block(const NodePoint& x, int slot, int iter) const = 0;

  // Minimize the node's strongly convex surrogate (linear model + trackers
  // + tau/2 proximal term + G where present) over the feasible set.
  // Must return a feasible point within inner_tol of the exact minimizer;
  // inner_tol == 0 requests the exact solution.
  virtual NodePoint surrogate_solve(const NodePoint& x, const NodePoint& pi,
                                    double tau, double inner_tol,
                                    int iter) const = 0;

  virtual BlockVec project_block(const BlockVec& v, int slot) const = 0;
};

// One multi-agent problem instance wired for the engine.
struct ScaProblem {
  BlockLayout layout;
  std::vector<const ObjectiveOracle*> oracles;  // one per node
  std::vector<MixingMatrix> mixers;             // one per block; support == owners

  // Optional nonsmooth convex part evaluated at block averages (zero when
  // absent). The subgradient hook feeds the stationarity residual.
  std::function<double(const std::vector<BlockVec>&)> g_value;
  std::function<BlockVec(const std::vector<BlockVec>&, int)> g_subgrad;

  ScaProblem(BlockLayout l, std::vector<const ObjectiveOracle*> o,
             std::vector<MixingMatrix> m);

  // Node index -> position in block m's owner list (and mixer support).
  int owner_pos(int m, int node) const;
};

struct NodeState {
  NodePoint x;     // iterate
  NodePoint y;     // gradient tracker
  NodePoint pi;    // aggregate-gradient estimate
  NodePoint grad;  // cached own gradient at x (iteration-indexed objective)
};

struct TrajectoryRow {
  int n = 0;
  double objective = 0.0;     // F(+G) at block averages
  double consensus = 0.0;     // max over blocks of owner disagreement
  double stationarity = 0.0;  // projected-gradient residual at averages
  double alpha = 0.0;
  double wall_s = 0.0;
};

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  void write_csv(std::ostream& os) const;
};

struct StopCriteria {
  int max_iters = 1000;
  double consensus_tol = 0.0;
  double stationarity_tol = 0.0;

  bool operator==(const StopCriteria&) const = default;
};

// States with trackers initialized: y = grad f at x0, pi = (|owners|-1) grad.
std::vector<NodeState> init_states(const ScaProblem& p,
                                   const std::vector<NodePoint>& x0,
                                   int iter0 = 0);

// One bulk-synchronous iteration: per-node surrogate solves on frozen data,
// then per-block consensus of iterates and trackers.
void sca_iteration(const ScaProblem& p, std::vector<NodeState>& states,
                   const ScheduleSet& s, int n);

// Per-block max over owners of ||x_i^m - mean_m||.
std::vector<double> consensus_residual(const ScaProblem& p,
                                       const std::vector<NodeState>& states);

std::vector<BlockVec> block_averages(const ScaProblem& p,
                                     const std::vector<NodeState>& states);

// || xbar - Proj_K(xbar - grad F(xbar) - g) || with g from the problem's
// subgradient hook (zero when G = 0).
double stationarity_residual(const ScaProblem& p,
                             const std::vector<BlockVec>& avgs, int iter);

double objective_at(const ScaProblem& p, const std::vector<BlockVec>& avgs);

std::pair<std::vector<NodeState>, TrajectoryRecord> run_to_termination(
    const ScaProblem& p, std::vector<NodeState> states, const ScheduleSet& s,
    const StopCriteria& stop);

}  // namespace dsca
