#include "dsca/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "dsca/projection.hpp"

namespace dsca {

AlgorithmTag algorithm_from_string(const std::string& name) {
  if (name == "lxgp-rm") return AlgorithmTag::LXGP_RM;
  if (name == "lxlp-rm") return AlgorithmTag::LXLP_RM;
  if (name == "gxgp-cm") return AlgorithmTag::GXGP_CM;
  if (name == "sc") return AlgorithmTag::SC;
  if (name == "sc-ni") return AlgorithmTag::SC_NI;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(AlgorithmTag tag) {
  switch (tag) {
    case AlgorithmTag::LXGP_RM: return "lxgp-rm";
    case AlgorithmTag::LXLP_RM: return "lxlp-rm";
    case AlgorithmTag::GXGP_CM: return "gxgp-cm";
    case AlgorithmTag::SC: return "sc";
    case AlgorithmTag::SC_NI: return "sc-ni";
  }
  throw std::invalid_argument("unknown algorithm tag");
}

namespace {

// The engine identifies nodes by index; rebuild the interference graph with
// ids 0..B-1 so mixer supports line up with block owner lists.
InterferenceGraph indexed_graph(const InterferenceGraph& g) {
  std::vector<int> ids(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) ids[i] = i;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.num_edges());
  for (auto [a, b] : g.edges()) edges.push_back({g.index_of(a), g.index_of(b)});
  return InterferenceGraph(std::move(ids), edges);
}

MixingMatrix trivial_mixer(int node) {
  MixingMatrix m;
  m.support = {node};
  m.weights = Eigen::MatrixXd::Ones(1, 1);
  m.theta = 1.0;
  return m;
}

Eigen::MatrixXd mat_from_vec(const BlockVec& v, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v(r * cols + c);
  return m;
}

BlockVec vec_from_mat(const Eigen::MatrixXd& m) {
  BlockVec v(m.rows() * m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
  return v;
}

void require_users_everywhere(const ProblemInstance& inst) {
  for (int b = 0; b < inst.num_bs(); ++b)
    if (inst.users_of(b).empty())
      throw std::invalid_argument("solver: every BS needs at least one user");
}

Eigen::MatrixXd initial_power(const ProblemInstance& inst, double frac) {
  Eigen::MatrixXd p(inst.num_bs(), inst.num_channels());
  for (int b = 0; b < inst.num_bs(); ++b)
    p.row(b).setConstant(frac * inst.power_budget(b) / inst.num_channels());
  return p;
}

// Direct-method oracle of one BS. Copy scope is either every BS (global
// power block) or the closed neighborhood (localized power blocks, one
// K-vector per subject). The scheduling block is always the last slot.
class RmOracle : public ObjectiveOracle {
 public:
  RmOracle(const ProblemInstance& inst, int b, std::vector<int> scope,
           bool split_p)
      : inst_(inst), b_(b), scope_(std::move(scope)), split_p_(split_p) {}

  int num_p_slots() const { return split_p() ? static_cast<int>(scope_.size()) : 1; }

  double f_value(const NodePoint& x) const override {
    auto [p, xb] = unpack(x);
    return f_rm_value_and_grad(inst_, b_, scope_, p, xb).value;
  }

  BlockVec f_grad_block(const NodePoint& x, int slot, int) const override {
    auto [p, xb] = unpack(x);
    RmEval e = f_rm_value_and_grad(inst_, b_, scope_, p, xb);
    if (slot < num_p_slots())
      return split_p() ? BlockVec(e.dp.row(slot).transpose()) : vec_from_mat(e.dp);
    return vec_from_mat(e.dx);
  }

  NodePoint surrogate_solve(const NodePoint& x, const NodePoint& pi, double tau,
                            double, int) const override {
    auto [p, xb] = unpack(x);
    Eigen::MatrixXd pi_p(scope_.size(), inst_.num_channels());
    if (split_p())
      for (size_t s = 0; s < scope_.size(); ++s)
        pi_p.row(static_cast<int>(s)) = pi[s].transpose();
    else
      pi_p = mat_from_vec(pi[0], static_cast<int>(scope_.size()),
                          inst_.num_channels());
    Eigen::MatrixXd pi_x =
        mat_from_vec(pi[num_p_slots()], num_own_users(), inst_.num_channels());

    Eigen::MatrixXd p_out, x_out;
    surrogate_solve_rm(inst_, b_, scope_, p, xb, pi_p, pi_x, tau, p_out, x_out);
    return pack(p_out, x_out);
  }

  BlockVec project_block(const BlockVec& v, int slot) const override {
    const int K = inst_.num_channels();
    if (slot < num_p_slots()) {
      if (split_p())
        return project_power(v, inst_.power_budget(scope_[slot]));
      Eigen::MatrixXd p = mat_from_vec(v, static_cast<int>(scope_.size()), K);
      for (int r = 0; r < p.rows(); ++r)
        p.row(r) = project_power(p.row(r).transpose(),
                                 inst_.power_budget(scope_[r]))
                       .transpose();
      return vec_from_mat(p);
    }
    Eigen::MatrixXd x = mat_from_vec(v, num_own_users(), K);
    for (int k = 0; k < K; ++k) x.col(k) = project_allocation_channel(x.col(k));
    return vec_from_mat(x);
  }

  NodePoint pack(const Eigen::MatrixXd& p, const Eigen::MatrixXd& xb) const {
    NodePoint out;
    if (split_p())
      for (size_t s = 0; s < scope_.size(); ++s)
        out.push_back(p.row(static_cast<int>(s)).transpose());
    else
      out.push_back(vec_from_mat(p));
    out.push_back(vec_from_mat(xb));
    return out;
  }

  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> unpack(const NodePoint& x) const {
    const int K = inst_.num_channels();
    Eigen::MatrixXd p(scope_.size(), K);
    if (split_p())
      for (size_t s = 0; s < scope_.size(); ++s)
        p.row(static_cast<int>(s)) = x[s].transpose();
    else
      p = mat_from_vec(x[0], static_cast<int>(scope_.size()), K);
    Eigen::MatrixXd xb = mat_from_vec(x[num_p_slots()], num_own_users(), K);
    return {std::move(p), std::move(xb)};
  }

  const std::vector<int>& scope() const { return scope_; }

 private:
  // Localized layouts carry one K-dim slot per subject BS; the global layout
  // carries all copies in a single slot.
  bool split_p() const { return split_p_; }
  int num_own_users() const {
    return static_cast<int>(inst_.users_of(b_).size());
  }

  const ProblemInstance& inst_;
  int b_;
  std::vector<int> scope_;  // sorted BS indices whose power this node copies
  bool split_p_;
};

// Decomposed-method oracle: full (p, x) copies at every node, convex part G
// handled by the problem hooks and the inexact surrogate solver.
class CmOracle : public ObjectiveOracle {
 public:
  CmOracle(const ProblemInstance& inst, int b, double inner_floor)
      : inst_(inst), b_(b), inner_floor_(inner_floor) {}

  double f_value(const NodePoint& v) const override {
    return f_cm_value_and_grad(inst_, b_, unpack_p_(v), unpack_x_(v)).value;
  }

  BlockVec f_grad_block(const NodePoint& v, int slot, int) const override {
    CmEval e = f_cm_value_and_grad(inst_, b_, unpack_p_(v), unpack_x_(v));
    return slot == 0 ? pack_p(e.dp) : pack_x(e.dx);
  }

  NodePoint surrogate_solve(const NodePoint& v, const NodePoint& pi, double tau,
                            double inner_tol, int) const override {
    Eigen::MatrixXd p_out;
    std::vector<Eigen::MatrixXd> x_out;
    surrogate_solve_cm(inst_, b_, unpack_p_(v), unpack_x_(v),
                       unpack_p(pi[0], inst_.num_bs(), inst_.num_channels()),
                       unpack_x(pi[1], inst_), tau,
                       std::max(inner_tol, inner_floor_), p_out, x_out);
    return {pack_p(p_out), pack_x(x_out)};
  }

  BlockVec project_block(const BlockVec& v, int slot) const override {
    if (slot == 0) {
      Eigen::MatrixXd p = unpack_p(v, inst_.num_bs(), inst_.num_channels());
      for (int b = 0; b < inst_.num_bs(); ++b)
        p.row(b) =
            project_power(p.row(b).transpose(), inst_.power_budget(b)).transpose();
      return pack_p(p);
    }
    std::vector<Eigen::MatrixXd> x = unpack_x(v, inst_);
    for (auto& xb : x)
      for (int k = 0; k < inst_.num_channels(); ++k)
        xb.col(k) = project_allocation_channel(xb.col(k));
    return pack_x(x);
  }

 private:
  Eigen::MatrixXd unpack_p_(const NodePoint& v) const {
    return unpack_p(v[0], inst_.num_bs(), inst_.num_channels());
  }
  std::vector<Eigen::MatrixXd> unpack_x_(const NodePoint& v) const {
    return unpack_x(v[1], inst_);
  }

  const ProblemInstance& inst_;
  int b_;
  double inner_floor_;
};

}  // namespace

SolveResult run_lxgp_rm(const ProblemInstance& inst, const AlgorithmConfig& cfg) {
  require_users_everywhere(inst);
  const int B = inst.num_bs();
  const int K = inst.num_channels();
  InterferenceGraph ig = indexed_graph(inst.graph());

  std::vector<int> all(B);
  for (int b = 0; b < B; ++b) all[b] = b;

  std::vector<Block> blocks;
  std::vector<MixingMatrix> mixers;
  blocks.push_back({"p", B * K, all});
  mixers.push_back(build_mixing_matrix(ig));
  for (int b = 0; b < B; ++b) {
    blocks.push_back({"x" + std::to_string(b),
                      static_cast<int>(inst.users_of(b).size()) * K, {b}});
    mixers.push_back(trivial_mixer(b));
  }

  std::vector<std::unique_ptr<RmOracle>> oracles;
  std::vector<const ObjectiveOracle*> ptrs;
  for (int b = 0; b < B; ++b) {
    oracles.push_back(std::make_unique<RmOracle>(inst, b, all, false));
    ptrs.push_back(oracles.back().get());
  }
  ScaProblem prob(BlockLayout(B, std::move(blocks)), ptrs, std::move(mixers));

  Eigen::MatrixXd p0 = initial_power(inst, cfg.init_power_frac);
  std::vector<NodePoint> x0(B);
  for (int b = 0; b < B; ++b)
    x0[b] = oracles[b]->pack(
        p0, Eigen::MatrixXd::Zero(inst.users_of(b).size(), K));

  auto [states, rec] =
      run_to_termination(prob, init_states(prob, x0), cfg.schedule, cfg.stop);

  SolveResult out;
  out.trajectory = std::move(rec);
  out.alloc.p.resize(B, K);
  out.alloc.x.resize(B);
  for (int b = 0; b < B; ++b) {
    auto [p, xb] = oracles[b]->unpack(states[b].x);
    out.alloc.p.row(b) = p.row(b);
    out.alloc.x[b] = xb;
  }
  out.alloc.clamp();
  return out;
}

SolveResult run_lxlp_rm(const ProblemInstance& inst, const AlgorithmConfig& cfg) {
  require_users_everywhere(inst);
  const int B = inst.num_bs();
  const int K = inst.num_channels();
  InterferenceGraph ig = indexed_graph(inst.graph());

  std::vector<Block> blocks;
  std::vector<MixingMatrix> mixers;
  for (int b = 0; b < B; ++b) {
    blocks.push_back({"p" + std::to_string(b), K, ig.closed_neighborhood(b)});
    mixers.push_back(build_local_mixing_matrix(ig, b));
  }
  for (int b = 0; b < B; ++b) {
    blocks.push_back({"x" + std::to_string(b),
                      static_cast<int>(inst.users_of(b).size()) * K, {b}});
    mixers.push_back(trivial_mixer(b));
  }

  std::vector<std::unique_ptr<RmOracle>> oracles;
  std::vector<const ObjectiveOracle*> ptrs;
  for (int b = 0; b < B; ++b) {
    // Owned p-blocks appear in ascending subject order, which is exactly the
    // closed neighborhood of b; that is also this oracle's copy scope.
    oracles.push_back(
        std::make_unique<RmOracle>(inst, b, ig.closed_neighborhood(b), true));
    ptrs.push_back(oracles.back().get());
  }
  ScaProblem prob(BlockLayout(B, std::move(blocks)), ptrs, std::move(mixers));

  Eigen::MatrixXd p0 = initial_power(inst, cfg.init_power_frac);
  std::vector<NodePoint> x0(B);
  for (int b = 0; b < B; ++b) {
    const auto& scope = oracles[b]->scope();
    Eigen::MatrixXd pb(scope.size(), K);
    for (size_t s = 0; s < scope.size(); ++s)
      pb.row(static_cast<int>(s)) = p0.row(scope[s]);
    x0[b] = oracles[b]->pack(
        pb, Eigen::MatrixXd::Zero(inst.users_of(b).size(), K));
  }

  auto [states, rec] =
      run_to_termination(prob, init_states(prob, x0), cfg.schedule, cfg.stop);

  SolveResult out;
  out.trajectory = std::move(rec);
  out.alloc.p.resize(B, K);
  out.alloc.x.resize(B);
  for (int b = 0; b < B; ++b) {
    auto [p, xb] = oracles[b]->unpack(states[b].x);
    const auto& scope = oracles[b]->scope();
    const int own = static_cast<int>(
        std::find(scope.begin(), scope.end(), b) - scope.begin());
    out.alloc.p.row(b) = p.row(own);
    out.alloc.x[b] = xb;
  }
  out.alloc.clamp();
  return out;
}

SolveResult run_gxgp_cm(const ProblemInstance& inst, const AlgorithmConfig& cfg) {
  require_users_everywhere(inst);
  const int B = inst.num_bs();
  const int K = inst.num_channels();
  InterferenceGraph ig = indexed_graph(inst.graph());

  std::vector<int> all(B);
  for (int b = 0; b < B; ++b) all[b] = b;
  int x_dim = 0;
  for (int b = 0; b < B; ++b)
    x_dim += static_cast<int>(inst.users_of(b).size()) * K;

  std::vector<Block> blocks{{"p", B * K, all}, {"x", x_dim, all}};
  MixingMatrix W = build_mixing_matrix(ig);
  std::vector<MixingMatrix> mixers{W, W};

  std::vector<std::unique_ptr<CmOracle>> oracles;
  std::vector<const ObjectiveOracle*> ptrs;
  for (int b = 0; b < B; ++b) {
    oracles.push_back(std::make_unique<CmOracle>(inst, b, cfg.cm_inner_floor));
    ptrs.push_back(oracles.back().get());
  }
  ScaProblem prob(BlockLayout(B, std::move(blocks)), ptrs, std::move(mixers));
  prob.g_value = [&inst](const std::vector<BlockVec>& avgs) {
    return g_cm_value_and_grad(inst,
                               unpack_p(avgs[0], inst.num_bs(), inst.num_channels()),
                               unpack_x(avgs[1], inst))
        .value;
  };
  prob.g_subgrad = [&inst](const std::vector<BlockVec>& avgs, int m) {
    GEval g = g_cm_value_and_grad(
        inst, unpack_p(avgs[0], inst.num_bs(), inst.num_channels()),
        unpack_x(avgs[1], inst));
    return m == 0 ? pack_p(g.dp) : pack_x(g.dx);
  };

  // The closed-form-free inner solver needs a usable conditioning; the
  // proximal weight is a free algorithm parameter.
  ScheduleSet sched = cfg.schedule;
  sched.tau0 = cfg.cm_tau0;

  Eigen::MatrixXd p0 = initial_power(inst, cfg.init_power_frac);
  std::vector<Eigen::MatrixXd> x0_x(B);
  for (int b = 0; b < B; ++b)
    x0_x[b] = Eigen::MatrixXd::Zero(inst.users_of(b).size(), K);
  std::vector<NodePoint> x0(B, NodePoint{pack_p(p0), pack_x(x0_x)});

  auto [states, rec] =
      run_to_termination(prob, init_states(prob, x0), sched, cfg.stop);

  SolveResult out;
  out.trajectory = std::move(rec);
  out.alloc.p.resize(B, K);
  out.alloc.x.resize(B);
  for (int b = 0; b < B; ++b) {
    Eigen::MatrixXd p = unpack_p(states[b].x[0], B, K);
    out.alloc.p.row(b) = p.row(b);
    out.alloc.x[b] = unpack_x(states[b].x[1], inst)[b];
  }
  out.alloc.clamp();
  return out;
}

namespace {

// Marginal rate of the channel-share term w x log(1 + c/x) in x.
double share_marginal(double w, double c, double x) {
  const double r = c / x;
  return w * (std::log1p(r) - r / (1.0 + r));
}

double single_cell_value(const Eigen::VectorXd& w, const Eigen::MatrixXd& gain,
                         const Eigen::MatrixXd& noise, const Eigen::VectorXd& p,
                         const Eigen::MatrixXd& x) {
  double val = 0.0;
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k)
      if (x(i, k) > 0.0)
        val += w(i) * x(i, k) *
               std::log1p(p(k) * gain(i, k) / (noise(i, k) * x(i, k)));
  return val;
}

// Exact channel-share step: per channel, equalize marginals via bisection on
// the multiplier.
void share_step(const Eigen::VectorXd& w, const Eigen::MatrixXd& gain,
                const Eigen::MatrixXd& noise, const Eigen::VectorXd& p,
                Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  for (int k = 0; k < x.cols(); ++k) {
    Eigen::VectorXd c(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      c(i) = p(k) > 0.0 ? p(k) * gain(i, k) / noise(i, k) : 0.0;
      any = any || c(i) > 0.0;
    }
    if (!any) {
      x.col(k).setZero();
      continue;
    }

    auto share_at = [&](double nu, int i) {
      if (c(i) <= 0.0) return 0.0;
      if (share_marginal(w(i), c(i), 1.0) >= nu) return 1.0;
      double lo = 1e-15, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (share_marginal(w(i), c(i), mid) >= nu ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    auto total = [&](double nu) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += share_at(nu, i);
      return s;
    };

    double nu_lo = 0.0;
    double nu_hi = 1.0;
    for (int it = 0; it < 200 && total(nu_hi) > 1.0; ++it) nu_hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (nu_lo + nu_hi);
      (total(mid) > 1.0 ? nu_lo : nu_hi) = mid;
    }
    for (int i = 0; i < n; ++i) x(i, k) = share_at(nu_hi, i);
  }
}

// Water-filling power step across channels for fixed shares.
void power_step(const Eigen::VectorXd& w, const Eigen::MatrixXd& gain,
                const Eigen::MatrixXd& noise, const Eigen::MatrixXd& x,
                double budget, Eigen::VectorXd& p) {
  const int K = static_cast<int>(p.size());
  auto marginal = [&](int k, double pk) {
    double s = 0.0;
    for (int i = 0; i < x.rows(); ++i)
      if (x(i, k) > 0.0)
        s += w(i) * x(i, k) * gain(i, k) /
             (noise(i, k) * x(i, k) + pk * gain(i, k));
    return s;
  };

  double mu_hi = 0.0;
  for (int k = 0; k < K; ++k) mu_hi = std::max(mu_hi, marginal(k, 0.0));
  if (mu_hi <= 0.0) return;  // nothing scheduled; keep current powers

  auto power_at = [&](double mu, int k) {
    if (marginal(k, 0.0) <= mu) return 0.0;
    if (marginal(k, budget) >= mu) return budget;
    double lo = 0.0, hi = budget;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (marginal(k, mid) >= mu ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  double mu_lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (mu_lo + mu_hi);
    double s = 0.0;
    for (int k = 0; k < K; ++k) s += power_at(mid, k);
    (s > budget ? mu_lo : mu_hi) = mid;
  }
  for (int k = 0; k < K; ++k) p(k) = power_at(mu_hi, k);
  // Spend the whole budget: scale up never hurts a nondecreasing objective.
  double s = p.sum();
  if (s > 0.0 && s < budget) p *= budget / s;
}

// Projected-gradient polish used when alternation stalls before meeting tol.
void pg_polish(const Eigen::VectorXd& w, const Eigen::MatrixXd& gain,
               const Eigen::MatrixXd& noise, double budget, Eigen::VectorXd& p,
               Eigen::MatrixXd& x) {
  double step = 0.1;
  double cur = single_cell_value(w, gain, noise, p, x);
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd gp = Eigen::VectorXd::Zero(p.size());
    Eigen::MatrixXd gx = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
      for (int k = 0; k < x.cols(); ++k) {
        const double xf = std::max(x(i, k), kScheduleFloor);
        const double c = p(k) * gain(i, k) / noise(i, k);
        gx(i, k) = c > 0.0 ? share_marginal(w(i), c, xf) : 0.0;
        gp(k) += w(i) * xf * gain(i, k) / (noise(i, k) * xf + p(k) * gain(i, k));
      }
    Eigen::VectorXd np = project_capped_simplex(p + step * gp, budget);
    Eigen::MatrixXd nx = x + step * gx;
    for (int k = 0; k < x.cols(); ++k)
      nx.col(k) = project_allocation_channel(nx.col(k));
    double nv = single_cell_value(w, gain, noise, np, nx);
    if (nv >= cur) {
      p = np;
      x = nx;
      cur = nv;
      step *= 1.2;
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
}

}  // namespace

void single_cell_solve(const Eigen::VectorXd& weights,
                       const Eigen::MatrixXd& signal_gain,
                       const Eigen::MatrixXd& eff_noise, double budget,
                       double tol, Eigen::VectorXd& p_out,
                       Eigen::MatrixXd& x_out) {
  const int n = static_cast<int>(signal_gain.rows());
  const int K = static_cast<int>(signal_gain.cols());
  if (weights.size() != n || eff_noise.rows() != n || eff_noise.cols() != K)
    throw std::invalid_argument("single_cell_solve: shape mismatch");
  if (budget <= 0.0)
    throw std::invalid_argument("single_cell_solve: budget must be positive");
  if ((eff_noise.array() <= 0.0).any())
    throw std::invalid_argument("single_cell_solve: noise must be positive");

  Eigen::VectorXd p = Eigen::VectorXd::Constant(K, budget / K);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, K);

  double prev = -std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int round = 0; round < 200; ++round) {
    share_step(weights, signal_gain, eff_noise, p, x);
    power_step(weights, signal_gain, eff_noise, x, budget, p);
    double val = single_cell_value(weights, signal_gain, eff_noise, p, x);
    if (std::abs(val - prev) <= tol * std::max(1.0, std::abs(val))) {
      converged = true;
      break;
    }
    prev = val;
  }
  if (!converged) pg_polish(weights, signal_gain, eff_noise, budget, p, x);

  p_out = p;
  x_out = x;
}

namespace {

// Build the single-cell inputs of BS b given the other cells' powers (or
// ignoring them entirely for the no-interference baseline).
void cell_inputs(const ProblemInstance& inst, int b, const Eigen::MatrixXd* p_all,
                 Eigen::VectorXd& w, Eigen::MatrixXd& gain,
                 Eigen::MatrixXd& noise) {
  const auto& ids = inst.users_of(b);
  const int n = static_cast<int>(ids.size());
  const int K = inst.num_channels();
  w.resize(n);
  gain.resize(n, K);
  noise.resize(n, K);
  for (int loc = 0; loc < n; ++loc) {
    const UserLink& ul = inst.user(ids[loc]);
    w(loc) = ul.weight;
    for (int k = 0; k < K; ++k) {
      gain(loc, k) = ul.signal_gain(k);
      double den = inst.noise();
      if (p_all)
        for (const auto& [bi, g] : ul.interference_gain)
          den += (*p_all)(bi, k) * g(k);
      noise(loc, k) = den;
    }
  }
}

}  // namespace

Allocation run_sc_ni(const ProblemInstance& inst, double tol) {
  require_users_everywhere(inst);
  Allocation a;
  a.p.resize(inst.num_bs(), inst.num_channels());
  a.x.resize(inst.num_bs());
  for (int b = 0; b < inst.num_bs(); ++b) {
    Eigen::VectorXd w, p;
    Eigen::MatrixXd gain, noise;
    cell_inputs(inst, b, nullptr, w, gain, noise);
    single_cell_solve(w, gain, noise, inst.power_budget(b), tol, p, a.x[b]);
    a.p.row(b) = p.transpose();
  }
  a.clamp();
  return a;
}

Allocation run_sc(const ProblemInstance& inst, int n_rounds, double tol) {
  require_users_everywhere(inst);
  Allocation a;
  a.p = Eigen::MatrixXd::Zero(inst.num_bs(), inst.num_channels());
  a.x.resize(inst.num_bs());
  for (int b = 0; b < inst.num_bs(); ++b)
    a.x[b] = Eigen::MatrixXd::Zero(inst.users_of(b).size(), inst.num_channels());

  for (int round = 0; round < n_rounds; ++round) {
    double change = 0.0;
    for (int b = 0; b < inst.num_bs(); ++b) {  // sequential, BS-id order
      Eigen::VectorXd w, p;
      Eigen::MatrixXd gain, noise;
      cell_inputs(inst, b, &a.p, w, gain, noise);
      single_cell_solve(w, gain, noise, inst.power_budget(b), tol, p, a.x[b]);
      change = std::max(change, (p.transpose() - a.p.row(b)).cwiseAbs().maxCoeff());
      a.p.row(b) = p.transpose();
    }
    if (change <= 1e-6) break;
  }
  a.clamp();
  return a;
}

SolveResult run_one_shot(const ProblemInstance& inst, const AlgorithmConfig& cfg) {
  switch (cfg.tag) {
    case AlgorithmTag::LXGP_RM: return run_lxgp_rm(inst, cfg);
    case AlgorithmTag::LXLP_RM: return run_lxlp_rm(inst, cfg);
    case AlgorithmTag::GXGP_CM: return run_gxgp_cm(inst, cfg);
    case AlgorithmTag::SC:
    case AlgorithmTag::SC_NI: {
      SolveResult out;
      out.alloc = cfg.tag == AlgorithmTag::SC
                      ? run_sc(inst, cfg.sc_rounds, cfg.sc_tol)
                      : run_sc_ni(inst, cfg.sc_tol);
      TrajectoryRow row;
      row.objective = -weighted_sum_rate(inst, out.alloc);
      out.trajectory.rows.push_back(row);
      return out;
    }
  }
  throw std::invalid_argument("unknown algorithm tag");
}

}  // namespace dsca
