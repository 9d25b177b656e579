#include "dsca/sca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dsca {

BlockLayout::BlockLayout(int num_nodes, std::vector<Block> blocks)
    : num_nodes_(num_nodes), blocks_(std::move(blocks)) {
  if (num_nodes_ <= 0) throw std::invalid_argument("layout: no nodes");
  owned_.resize(num_nodes_);
  for (int m = 0; m < num_blocks(); ++m) {
    const Block& blk = blocks_[m];
    if (blk.dim <= 0) throw std::invalid_argument("layout: nonpositive block dim");
    if (blk.owners.empty()) throw std::invalid_argument("layout: empty owner set");
    if (!std::is_sorted(blk.owners.begin(), blk.owners.end()))
      throw std::invalid_argument("layout: owners must be sorted");
    for (int o : blk.owners) {
      if (o < 0 || o >= num_nodes_)
        throw std::invalid_argument("layout: owner outside node set");
      owned_[o].push_back(m);
    }
  }
}

int BlockLayout::total_dim() const {
  int d = 0;
  for (const auto& b : blocks_) d += b.dim;
  return d;
}

int BlockLayout::slot_of(int node, int m) const {
  const auto& list = owned_[node];
  auto it = std::find(list.begin(), list.end(), m);
  return it == list.end() ? -1 : static_cast<int>(it - list.begin());
}

ScaProblem::ScaProblem(BlockLayout l, std::vector<const ObjectiveOracle*> o,
                       std::vector<MixingMatrix> m)
    : layout(std::move(l)), oracles(std::move(o)), mixers(std::move(m)) {
  if (static_cast<int>(oracles.size()) != layout.num_nodes())
    throw std::invalid_argument("sca: one oracle per node required");
  if (static_cast<int>(mixers.size()) != layout.num_blocks())
    throw std::invalid_argument("sca: one mixing matrix per block required");
  for (int m_ = 0; m_ < layout.num_blocks(); ++m_) {
    const auto& owners = layout.block(m_).owners;
    const auto& sup = mixers[m_].support;
    if (std::vector<int>(sup.begin(), sup.end()) !=
        std::vector<int>(owners.begin(), owners.end()))
      throw std::invalid_argument("sca: mixer support must equal block owners");
  }
}

int ScaProblem::owner_pos(int m, int node) const {
  const auto& owners = layout.block(m).owners;
  auto it = std::lower_bound(owners.begin(), owners.end(), node);
  if (it == owners.end() || *it != node)
    throw std::invalid_argument("sca: node is not an owner of block");
  return static_cast<int>(it - owners.begin());
}

void TrajectoryRecord::write_csv(std::ostream& os) const {
  os << "n,objective,consensus,stationarity,alpha,wall_s\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line.precision(17);
    line << r.n << "," << r.objective << "," << r.consensus << ","
         << r.stationarity << "," << r.alpha << "," << r.wall_s << "\n";
    os << line.str();
  }
}

std::vector<NodeState> init_states(const ScaProblem& p,
                                   const std::vector<NodePoint>& x0,
                                   int iter0) {
  const int I = p.layout.num_nodes();
  if (static_cast<int>(x0.size()) != I)
    throw std::invalid_argument("sca: one initial point per node required");
  std::vector<NodeState> states(I);
  for (int i = 0; i < I; ++i) {
    const auto& owned = p.layout.owned_blocks(i);
    if (x0[i].size() != owned.size())
      throw std::invalid_argument("sca: initial point has wrong block count");
    NodeState& st = states[i];
    st.x = x0[i];
    st.grad.resize(owned.size());
    st.y.resize(owned.size());
    st.pi.resize(owned.size());
    for (size_t s = 0; s < owned.size(); ++s) {
      st.grad[s] = p.oracles[i]->f_grad_block(st.x, static_cast<int>(s), iter0);
      st.y[s] = st.grad[s];
      const int Im = static_cast<int>(p.layout.block(owned[s]).owners.size());
      st.pi[s] = Im * st.y[s] - st.grad[s];
    }
  }
  return states;
}

void sca_iteration(const ScaProblem& p, std::vector<NodeState>& states,
                   const ScheduleSet& s, int n) {
  const int I = p.layout.num_nodes();
  const double alpha = s.alpha(n);
  const double eps = s.eps(n);
  const double tau = s.tau(n);

  // Local solves on frozen iteration-n data.
  std::vector<NodePoint> z(I);
  for (int i = 0; i < I; ++i) {
    NodePoint xs = p.oracles[i]->surrogate_solve(states[i].x, states[i].pi,
                                                 tau, eps, n);
    z[i].resize(xs.size());
    for (size_t slot = 0; slot < xs.size(); ++slot)
      z[i][slot] = states[i].x[slot] + alpha * (xs[slot] - states[i].x[slot]);
  }

  // Consensus of iterates; summation in ascending owner order.
  std::vector<NodePoint> new_x(I);
  for (int i = 0; i < I; ++i) new_x[i].resize(states[i].x.size());
  for (int m = 0; m < p.layout.num_blocks(); ++m) {
    const Block& blk = p.layout.block(m);
    const auto& W = p.mixers[m].weights;
    for (size_t a = 0; a < blk.owners.size(); ++a) {
      const int i = blk.owners[a];
      const int slot_i = p.layout.slot_of(i, m);
      BlockVec acc = BlockVec::Zero(blk.dim);
      for (size_t b = 0; b < blk.owners.size(); ++b) {
        const int j = blk.owners[b];
        const double w = W(static_cast<int>(a), static_cast<int>(b));
        if (w != 0.0) acc += w * z[j][p.layout.slot_of(j, m)];
      }
      new_x[i][slot_i] = acc;
    }
  }

  // Gradients at the new iterate, under the iteration-(n+1) objective when
  // smoothing is active.
  std::vector<NodePoint> new_grad(I);
  for (int i = 0; i < I; ++i) {
    new_grad[i].resize(new_x[i].size());
    for (size_t slot = 0; slot < new_x[i].size(); ++slot)
      new_grad[i][slot] =
          p.oracles[i]->f_grad_block(new_x[i], static_cast<int>(slot), n + 1);
  }

  // Tracker consensus plus the gradient correction, then the aggregate
  // estimate with the per-block owner count.
  for (int m = 0; m < p.layout.num_blocks(); ++m) {
    const Block& blk = p.layout.block(m);
    const auto& W = p.mixers[m].weights;
    const int Im = static_cast<int>(blk.owners.size());
    std::vector<BlockVec> new_y(blk.owners.size());
    for (size_t a = 0; a < blk.owners.size(); ++a) {
      BlockVec acc = BlockVec::Zero(blk.dim);
      for (size_t b = 0; b < blk.owners.size(); ++b) {
        const int j = blk.owners[b];
        const double w = W(static_cast<int>(a), static_cast<int>(b));
        if (w != 0.0) acc += w * states[j].y[p.layout.slot_of(j, m)];
      }
      new_y[a] = acc;
    }
    for (size_t a = 0; a < blk.owners.size(); ++a) {
      const int i = blk.owners[a];
      const int slot = p.layout.slot_of(i, m);
      new_y[a] += new_grad[i][slot] - states[i].grad[slot];
      states[i].y[slot] = new_y[a];
      states[i].pi[slot] = Im * new_y[a] - new_grad[i][slot];
    }
  }

  for (int i = 0; i < I; ++i) {
    states[i].x = std::move(new_x[i]);
    states[i].grad = std::move(new_grad[i]);
  }
}

std::vector<BlockVec> block_averages(const ScaProblem& p,
                                     const std::vector<NodeState>& states) {
  std::vector<BlockVec> avgs(p.layout.num_blocks());
  for (int m = 0; m < p.layout.num_blocks(); ++m) {
    const Block& blk = p.layout.block(m);
    BlockVec acc = BlockVec::Zero(blk.dim);
    for (int i : blk.owners) acc += states[i].x[p.layout.slot_of(i, m)];
    avgs[m] = acc / static_cast<double>(blk.owners.size());
  }
  return avgs;
}

std::vector<double> consensus_residual(const ScaProblem& p,
                                       const std::vector<NodeState>& states) {
  auto avgs = block_averages(p, states);
  std::vector<double> out(p.layout.num_blocks(), 0.0);
  for (int m = 0; m < p.layout.num_blocks(); ++m) {
    const Block& blk = p.layout.block(m);
    for (int i : blk.owners)
      out[m] = std::max(out[m],
                        (states[i].x[p.layout.slot_of(i, m)] - avgs[m]).norm());
  }
  return out;
}

// View of the block averages as seen by node i (its owned blocks only).
static NodePoint node_view(const ScaProblem& p, const std::vector<BlockVec>& avgs,
                           int i) {
  const auto& owned = p.layout.owned_blocks(i);
  NodePoint v(owned.size());
  for (size_t s = 0; s < owned.size(); ++s) v[s] = avgs[owned[s]];
  return v;
}

double stationarity_residual(const ScaProblem& p,
                             const std::vector<BlockVec>& avgs, int iter) {
  double sq = 0.0;
  for (int m = 0; m < p.layout.num_blocks(); ++m) {
    const Block& blk = p.layout.block(m);
    BlockVec grad_sum = BlockVec::Zero(blk.dim);
    for (int i : blk.owners) {
      NodePoint v = node_view(p, avgs, i);
      grad_sum += p.oracles[i]->f_grad_block(v, p.layout.slot_of(i, m), iter);
    }
    if (p.g_subgrad) grad_sum += p.g_subgrad(avgs, m);
    const int i0 = blk.owners.front();
    BlockVec proj = p.oracles[i0]->project_block(avgs[m] - grad_sum,
                                                 p.layout.slot_of(i0, m));
    sq += (avgs[m] - proj).squaredNorm();
  }
  return std::sqrt(sq);
}

double objective_at(const ScaProblem& p, const std::vector<BlockVec>& avgs) {
  double val = 0.0;
  for (int i = 0; i < p.layout.num_nodes(); ++i)
    val += p.oracles[i]->f_value(node_view(p, avgs, i));
  if (p.g_value) val += p.g_value(avgs);
  return val;
}

std::pair<std::vector<NodeState>, TrajectoryRecord> run_to_termination(
    const ScaProblem& p, std::vector<NodeState> states, const ScheduleSet& s,
    const StopCriteria& stop) {
  TrajectoryRecord rec;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  auto record = [&](int n) {
    auto avgs = block_averages(p, states);
    auto cons = consensus_residual(p, states);
    TrajectoryRow row;
    row.n = n;
    row.objective = objective_at(p, avgs);
    row.consensus = cons.empty() ? 0.0 : *std::max_element(cons.begin(), cons.end());
    row.stationarity = stationarity_residual(p, avgs, n);
    row.alpha = s.alpha(n);
    row.wall_s = elapsed();
    rec.rows.push_back(row);
    return row;
  };

  record(0);
  for (int n = 1; n <= stop.max_iters; ++n) {
    sca_iteration(p, states, s, n);
    TrajectoryRow row = record(n);
    if (stop.consensus_tol > 0.0 && stop.stationarity_tol > 0.0 &&
        row.consensus <= stop.consensus_tol &&
        row.stationarity <= stop.stationarity_tol)
      break;
  }
  return {std::move(states), std::move(rec)};
}

}  // namespace dsca
