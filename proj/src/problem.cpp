#include "dsca/problem.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dsca/projection.hpp"
#include "dsca/rng.hpp"

namespace dsca {

ProblemInstance::ProblemInstance(InterferenceGraph graph, int num_channels,
                                 std::vector<UserLink> users,
                                 Eigen::VectorXd power_budget, double noise)
    : graph_(std::move(graph)),
      channels_(num_channels),
      users_(std::move(users)),
      budget_(std::move(power_budget)),
      noise_(noise) {
  if (channels_ <= 0) throw std::invalid_argument("instance: need >= 1 channel");
  if (noise_ <= 0.0) throw std::invalid_argument("instance: noise must be positive");
  if (budget_.size() != graph_.num_nodes())
    throw std::invalid_argument("instance: one budget per BS required");
  if ((budget_.array() <= 0.0).any())
    throw std::invalid_argument("instance: budgets must be positive");

  users_of_.resize(graph_.num_nodes());
  for (int u = 0; u < num_users(); ++u) {
    const UserLink& ul = users_[u];
    if (ul.serving_bs < 0 || ul.serving_bs >= graph_.num_nodes())
      throw std::invalid_argument("instance: user served by unknown BS");
    if (ul.signal_gain.size() != channels_)
      throw std::invalid_argument("instance: signal gain size mismatch");
    auto nb = graph_.closed_neighborhood(graph_.nodes()[ul.serving_bs]);
    for (const auto& [b, g] : ul.interference_gain) {
      if (g.size() != channels_)
        throw std::invalid_argument("instance: interference gain size mismatch");
      int node_id = graph_.nodes()[b];
      if (!std::binary_search(nb.begin(), nb.end(), node_id) ||
          b == ul.serving_bs)
        throw std::invalid_argument(
            "instance: interference gain outside the serving neighborhood");
    }
    users_of_[ul.serving_bs].push_back(u);
  }
}

void ProblemInstance::set_weights(const Eigen::VectorXd& w) {
  if (w.size() != num_users())
    throw std::invalid_argument("instance: one weight per user required");
  for (int u = 0; u < num_users(); ++u) {
    if (w(u) <= 0.0)
      throw std::invalid_argument("instance: weights must be positive");
    users_[u].weight = w(u);
  }
}

double ProblemInstance::gain(int b, int u, int k) const {
  const UserLink& ul = users_[u];
  if (b == ul.serving_bs) return ul.signal_gain(k);
  for (const auto& [bi, g] : ul.interference_gain)
    if (bi == b) return g(k);
  return 0.0;
}

void ProblemInstance::save(std::ostream& os) const {
  os.precision(17);
  os << "dsca-instance 1\n";
  os << "bs " << num_bs() << "\n";
  os << "edges " << graph_.num_edges() << "\n";
  for (auto [a, b] : graph_.edges())
    os << graph_.index_of(a) << " " << graph_.index_of(b) << "\n";
  os << "channels " << channels_ << "\n";
  os << "noise " << noise_ << "\n";
  os << "budgets";
  for (int b = 0; b < num_bs(); ++b) os << " " << budget_(b);
  os << "\n";
  os << "users " << num_users() << "\n";
  for (const auto& ul : users_) {
    os << ul.serving_bs << " " << ul.weight << "\n";
    os << "signal";
    for (int k = 0; k < channels_; ++k) os << " " << ul.signal_gain(k);
    os << "\n";
    os << "interference " << ul.interference_gain.size() << "\n";
    for (const auto& [b, g] : ul.interference_gain) {
      os << b;
      for (int k = 0; k < channels_; ++k) os << " " << g(k);
      os << "\n";
    }
  }
}

ProblemInstance ProblemInstance::load(std::istream& is) {
  auto expect = [&is](const char* tag) {
    std::string tok;
    is >> tok;
    if (tok != tag)
      throw std::runtime_error(std::string("instance parse: expected '") + tag +
                               "' got '" + tok + "'");
  };
  expect("dsca-instance");
  int version;
  is >> version;
  if (version != 1) throw std::runtime_error("instance parse: unknown version");
  expect("bs");
  int B;
  is >> B;
  expect("edges");
  int E;
  is >> E;
  std::vector<std::pair<int, int>> edges(E);
  for (auto& [a, b] : edges) is >> a >> b;
  std::vector<int> ids(B);
  for (int i = 0; i < B; ++i) ids[i] = i;
  InterferenceGraph g(ids, edges);
  expect("channels");
  int K;
  is >> K;
  expect("noise");
  double noise;
  is >> noise;
  expect("budgets");
  Eigen::VectorXd budgets(B);
  for (int b = 0; b < B; ++b) is >> budgets(b);
  expect("users");
  int U;
  is >> U;
  std::vector<UserLink> users(U);
  for (auto& ul : users) {
    is >> ul.serving_bs >> ul.weight;
    expect("signal");
    ul.signal_gain.resize(K);
    for (int k = 0; k < K; ++k) is >> ul.signal_gain(k);
    expect("interference");
    int ni;
    is >> ni;
    ul.interference_gain.resize(ni);
    for (auto& [b, gv] : ul.interference_gain) {
      is >> b;
      gv.resize(K);
      for (int k = 0; k < K; ++k) is >> gv(k);
    }
  }
  if (!is) throw std::runtime_error("instance parse: truncated input");
  return ProblemInstance(std::move(g), K, std::move(users), std::move(budgets),
                         noise);
}

ProblemInstance sample_instance(const InterferenceGraph& topo, int num_channels,
                                int users_per_bs, double noise,
                                const Eigen::VectorXd& budgets, double sig_scale,
                                double intf_scale, uint64_t seed) {
  if (sig_scale <= 0.0 || intf_scale <= 0.0)
    throw std::invalid_argument("sample_instance: scales must be positive");
  Rng rng(seed);
  std::vector<UserLink> users;
  for (int b = 0; b < topo.num_nodes(); ++b) {
    int b_id = topo.nodes()[b];
    std::vector<int> nbrs = topo.neighbors(b_id);
    for (int u = 0; u < users_per_bs; ++u) {
      UserLink ul;
      ul.serving_bs = b;
      ul.weight = 1.0;
      ul.signal_gain.resize(num_channels);
      for (int k = 0; k < num_channels; ++k)
        ul.signal_gain(k) = rng.next_rayleigh(sig_scale);
      for (int nb_id : nbrs) {
        Eigen::VectorXd g(num_channels);
        for (int k = 0; k < num_channels; ++k) g(k) = rng.next_rayleigh(intf_scale);
        ul.interference_gain.push_back({topo.index_of(nb_id), g});
      }
      users.push_back(std::move(ul));
    }
  }
  return ProblemInstance(topo, num_channels, std::move(users), budgets, noise);
}

void Allocation::clamp() {
  p = p.cwiseMax(0.0);
  for (auto& xb : x) xb = xb.cwiseMax(0.0);
}

bool Allocation::feasible(const ProblemInstance& inst, double tol) const {
  if (p.rows() != inst.num_bs() || p.cols() != inst.num_channels()) return false;
  if (static_cast<int>(x.size()) != inst.num_bs()) return false;
  for (int b = 0; b < inst.num_bs(); ++b) {
    if ((p.row(b).array() < -tol).any()) return false;
    if (p.row(b).sum() > inst.power_budget(b) + tol) return false;
    const auto& xb = x[b];
    if (xb.rows() != static_cast<int>(inst.users_of(b).size()) ||
        xb.cols() != inst.num_channels())
      return false;
    if ((xb.array() < -tol).any() || (xb.array() > 1.0 + tol).any()) return false;
    for (int k = 0; k < inst.num_channels(); ++k)
      if (xb.col(k).sum() > 1.0 + tol) return false;
  }
  return true;
}

double rate_term(double weight, double x, double p, double signal_gain,
                 double noise_plus_interference) {
  return weight * x * std::log1p(p * signal_gain / noise_plus_interference);
}

// sigma^2 + sum of neighbor interference seen by user u in channel k.
static double interference_den(const ProblemInstance& inst, int u, int k,
                               const Eigen::MatrixXd& p) {
  const UserLink& ul = inst.user(u);
  double den = inst.noise();
  for (const auto& [b, g] : ul.interference_gain) den += p(b, k) * g(k);
  return den;
}

Eigen::VectorXd realized_user_rates(const ProblemInstance& inst,
                                    const Allocation& a) {
  Eigen::VectorXd rates = Eigen::VectorXd::Zero(inst.num_users());
  for (int b = 0; b < inst.num_bs(); ++b) {
    const auto& ids = inst.users_of(b);
    for (size_t loc = 0; loc < ids.size(); ++loc) {
      int u = ids[loc];
      const UserLink& ul = inst.user(u);
      for (int k = 0; k < inst.num_channels(); ++k)
        rates(u) += rate_term(1.0, a.x[b](loc, k), a.p(b, k), ul.signal_gain(k),
                              interference_den(inst, u, k, a.p));
    }
  }
  return rates;
}

double weighted_sum_rate(const ProblemInstance& inst, const Allocation& a) {
  Eigen::VectorXd rates = realized_user_rates(inst, a);
  double total = 0.0;
  for (int u = 0; u < inst.num_users(); ++u)
    total += inst.user(u).weight * rates(u);
  return total;
}

RmEval f_rm_value_and_grad(const ProblemInstance& inst, int b,
                           const std::vector<int>& scope,
                           const Eigen::MatrixXd& p_copies,
                           const Eigen::MatrixXd& x_b) {
  const int K = inst.num_channels();
  const auto& ids = inst.users_of(b);
  RmEval out;
  out.dp = Eigen::MatrixXd::Zero(p_copies.rows(), K);
  out.dx = Eigen::MatrixXd::Zero(x_b.rows(), K);

  // Position of each subject BS within the copy scope.
  auto row_of = [&scope](int bs) {
    auto it = std::find(scope.begin(), scope.end(), bs);
    if (it == scope.end())
      throw std::invalid_argument("f_rm: BS outside copy scope");
    return static_cast<int>(it - scope.begin());
  };
  const int rb = row_of(b);

  for (size_t loc = 0; loc < ids.size(); ++loc) {
    const int u = ids[loc];
    const UserLink& ul = inst.user(u);
    for (int k = 0; k < K; ++k) {
      double den = inst.noise();
      for (const auto& [bi, g] : ul.interference_gain)
        den += p_copies(row_of(bi), k) * g(k);
      const double sig = p_copies(rb, k) * ul.signal_gain(k);
      const double log_term = std::log1p(sig / den);
      const double w = ul.weight;
      const double xv = x_b(static_cast<int>(loc), k);

      out.value -= w * xv * log_term;
      out.dx(static_cast<int>(loc), k) = -w * log_term;
      out.dp(rb, k) -= w * xv * ul.signal_gain(k) / (den + sig);
      for (const auto& [bi, g] : ul.interference_gain)
        out.dp(row_of(bi), k) += w * xv * g(k) * sig / ((den + sig) * den);
    }
  }
  return out;
}

void surrogate_solve_rm(const ProblemInstance& inst, int b,
                        const std::vector<int>& scope,
                        const Eigen::MatrixXd& p_copies,
                        const Eigen::MatrixXd& x_b,
                        const Eigen::MatrixXd& pi_p, const Eigen::MatrixXd& pi_x,
                        double tau, Eigen::MatrixXd& p_out,
                        Eigen::MatrixXd& x_out) {
  RmEval eval = f_rm_value_and_grad(inst, b, scope, p_copies, x_b);
  Eigen::MatrixXd p_step = p_copies - (eval.dp + pi_p) / tau;
  Eigen::MatrixXd x_step = x_b - (eval.dx + pi_x) / tau;

  p_out.resize(p_copies.rows(), p_copies.cols());
  for (int r = 0; r < p_step.rows(); ++r)
    p_out.row(r) =
        project_power(p_step.row(r).transpose(), inst.power_budget(scope[r]))
            .transpose();
  x_out.resize(x_b.rows(), x_b.cols());
  for (int k = 0; k < x_step.cols(); ++k)
    x_out.col(k) = project_allocation_channel(x_step.col(k));
}

CmEval f_cm_value_and_grad(const ProblemInstance& inst, int b,
                           const Eigen::MatrixXd& p,
                           const std::vector<Eigen::MatrixXd>& x) {
  const int K = inst.num_channels();
  CmEval out;
  out.dp = Eigen::MatrixXd::Zero(inst.num_bs(), K);
  out.dx.resize(inst.num_bs());
  for (int bb = 0; bb < inst.num_bs(); ++bb)
    out.dx[bb] =
        Eigen::MatrixXd::Zero(static_cast<int>(inst.users_of(bb).size()), K);

  const auto& ids = inst.users_of(b);
  for (size_t loc = 0; loc < ids.size(); ++loc) {
    const int u = ids[loc];
    const UserLink& ul = inst.user(u);
    for (int k = 0; k < K; ++k) {
      double den = inst.noise();
      for (const auto& [bi, g] : ul.interference_gain) den += p(bi, k) * g(k);
      const double w = ul.weight;
      const double xv = x[b](static_cast<int>(loc), k);
      const double log_term = std::log(den);

      out.value += w * xv * log_term;
      out.dx[b](static_cast<int>(loc), k) = w * log_term;
      for (const auto& [bi, g] : ul.interference_gain)
        out.dp(bi, k) += w * xv * g(k) / den;
    }
  }
  return out;
}

GEval g_cm_value_and_grad(const ProblemInstance& inst, const Eigen::MatrixXd& p,
                          const std::vector<Eigen::MatrixXd>& x) {
  const int K = inst.num_channels();
  GEval out;
  out.dp = Eigen::MatrixXd::Zero(inst.num_bs(), K);
  out.dx.resize(inst.num_bs());
  for (int bb = 0; bb < inst.num_bs(); ++bb)
    out.dx[bb] =
        Eigen::MatrixXd::Zero(static_cast<int>(inst.users_of(bb).size()), K);

  for (int b = 0; b < inst.num_bs(); ++b) {
    const auto& ids = inst.users_of(b);
    for (size_t loc = 0; loc < ids.size(); ++loc) {
      const int u = ids[loc];
      const UserLink& ul = inst.user(u);
      for (int k = 0; k < K; ++k) {
        // total received power: signal plus neighbor interference
        double c = p(b, k) * ul.signal_gain(k);
        for (const auto& [bi, g] : ul.interference_gain) c += p(bi, k) * g(k);
        const double w = ul.weight;
        const double xv = x[b](static_cast<int>(loc), k);
        const double xf = std::max(xv, kScheduleFloor);
        const double inner = inst.noise() + c / xf;

        if (xv > kScheduleFloor) out.value -= w * xv * std::log(inner);
        out.dx[b](static_cast<int>(loc), k) =
            -w * (std::log(inner) - (c / xf) / inner);
        const double p_coeff = -w * xf / (inst.noise() * xf + c);
        out.dp(b, k) += p_coeff * ul.signal_gain(k);
        for (const auto& [bi, g] : ul.interference_gain)
          out.dp(bi, k) += p_coeff * g(k);
      }
    }
  }
  return out;
}

Eigen::VectorXd pack_p(const Eigen::MatrixXd& p) {
  Eigen::VectorXd v(p.rows() * p.cols());
  for (int b = 0; b < p.rows(); ++b)
    for (int k = 0; k < p.cols(); ++k) v(b * p.cols() + k) = p(b, k);
  return v;
}

Eigen::MatrixXd unpack_p(const Eigen::VectorXd& v, int num_bs, int num_channels) {
  Eigen::MatrixXd p(num_bs, num_channels);
  for (int b = 0; b < num_bs; ++b)
    for (int k = 0; k < num_channels; ++k) p(b, k) = v(b * num_channels + k);
  return p;
}

Eigen::VectorXd pack_x(const std::vector<Eigen::MatrixXd>& x) {
  int total = 0;
  for (const auto& m : x) total += static_cast<int>(m.size());
  Eigen::VectorXd v(total);
  int off = 0;
  for (const auto& m : x)
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) v(off++) = m(r, c);
  return v;
}

std::vector<Eigen::MatrixXd> unpack_x(const Eigen::VectorXd& v,
                                      const ProblemInstance& inst) {
  std::vector<Eigen::MatrixXd> x(inst.num_bs());
  int off = 0;
  for (int b = 0; b < inst.num_bs(); ++b) {
    const int nu = static_cast<int>(inst.users_of(b).size());
    x[b].resize(nu, inst.num_channels());
    for (int r = 0; r < nu; ++r)
      for (int c = 0; c < inst.num_channels(); ++c) x[b](r, c) = v(off++);
  }
  return x;
}

namespace {

// Projection of the full (p, x) pair onto the feasible set.
void project_pair(const ProblemInstance& inst, Eigen::MatrixXd& p,
                  std::vector<Eigen::MatrixXd>& x) {
  for (int b = 0; b < inst.num_bs(); ++b)
    p.row(b) =
        project_power(p.row(b).transpose(), inst.power_budget(b)).transpose();
  for (int b = 0; b < inst.num_bs(); ++b)
    for (int k = 0; k < inst.num_channels(); ++k)
      x[b].col(k) = project_allocation_channel(x[b].col(k));
}

}  // namespace

void surrogate_solve_cm(const ProblemInstance& inst, int b,
                        const Eigen::MatrixXd& p,
                        const std::vector<Eigen::MatrixXd>& x,
                        const Eigen::MatrixXd& pi_p,
                        const std::vector<Eigen::MatrixXd>& pi_x, double tau,
                        double inner_tol, Eigen::MatrixXd& p_out,
                        std::vector<Eigen::MatrixXd>& x_out) {
  CmEval f = f_cm_value_and_grad(inst, b, p, x);
  // Constant linear coefficients: own-gradient linearization plus trackers.
  Eigen::MatrixXd lin_p = f.dp + pi_p;
  std::vector<Eigen::MatrixXd> lin_x(inst.num_bs());
  for (int bb = 0; bb < inst.num_bs(); ++bb) lin_x[bb] = f.dx[bb] + pi_x[bb];

  auto smooth_value = [&](const Eigen::MatrixXd& vp,
                          const std::vector<Eigen::MatrixXd>& vx) {
    GEval g = g_cm_value_and_grad(inst, vp, vx);
    double val = g.value;
    val += (lin_p.array() * (vp - p).array()).sum();
    val += 0.5 * tau * (vp - p).squaredNorm();
    for (int bb = 0; bb < inst.num_bs(); ++bb) {
      val += (lin_x[bb].array() * (vx[bb] - x[bb]).array()).sum();
      val += 0.5 * tau * (vx[bb] - x[bb]).squaredNorm();
    }
    return val;
  };

  Eigen::MatrixXd vp = p;
  std::vector<Eigen::MatrixXd> vx = x;
  double step = 1.0 / std::max(tau, 1e-12);
  const int cap = 50000;
  double residual = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cap; ++it) {
    GEval g = g_cm_value_and_grad(inst, vp, vx);
    Eigen::MatrixXd grad_p = lin_p + tau * (vp - p) + g.dp;
    std::vector<Eigen::MatrixXd> grad_x(inst.num_bs());
    for (int bb = 0; bb < inst.num_bs(); ++bb)
      grad_x[bb] = lin_x[bb] + tau * (vx[bb] - x[bb]) + g.dx[bb];
    const double cur = smooth_value(vp, vx);

    // Backtracking on the quadratic upper model.
    Eigen::MatrixXd np;
    std::vector<Eigen::MatrixXd> nx;
    double move2 = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      np = vp - step * grad_p;
      nx.resize(inst.num_bs());
      for (int bb = 0; bb < inst.num_bs(); ++bb)
        nx[bb] = vx[bb] - step * grad_x[bb];
      project_pair(inst, np, nx);

      double lin = ((np - vp).array() * grad_p.array()).sum();
      move2 = (np - vp).squaredNorm();
      for (int bb = 0; bb < inst.num_bs(); ++bb) {
        lin += ((nx[bb] - vx[bb]).array() * grad_x[bb].array()).sum();
        move2 += (nx[bb] - vx[bb]).squaredNorm();
      }
      if (smooth_value(np, nx) <= cur + lin + move2 / (2.0 * step) + 1e-14)
        break;
      step *= 0.5;
    }

    residual = std::sqrt(move2) / (step * tau);
    vp = np;
    vx = nx;
    if (residual <= inner_tol) {
      p_out = vp;
      x_out = vx;
      return;
    }
    step = std::min(step * 1.25, 1.0 / std::max(tau, 1e-12));
  }
  std::ostringstream os;
  os << "surrogate_solve_cm: no convergence for BS " << b
     << " within iteration cap; distance bound " << residual << " > tol "
     << inner_tol;
  throw std::runtime_error(os.str());
}

}  // namespace dsca
