#include "dsca/graph.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dsca {

InterferenceGraph::InterferenceGraph(
    std::vector<int> node_ids, const std::vector<std::pair<int, int>>& edge_list)
    : nodes_(std::move(node_ids)) {
  if (nodes_.empty()) throw std::invalid_argument("graph: empty node set");
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
    throw std::invalid_argument("graph: duplicate node id");

  const int n = num_nodes();
  adj_.assign(n, std::vector<bool>(n, false));
  std::set<std::pair<int, int>> dedup;
  for (auto [a, b] : edge_list) {
    if (a == b) {
      std::ostringstream os;
      os << "graph: self-loop at node " << a;
      throw std::invalid_argument(os.str());
    }
    if (!has_node(a) || !has_node(b)) {
      std::ostringstream os;
      os << "graph: edge (" << a << "," << b << ") has endpoint outside node set";
      throw std::invalid_argument(os.str());
    }
    dedup.insert({std::min(a, b), std::max(a, b)});
  }
  edges_.assign(dedup.begin(), dedup.end());
  for (auto [a, b] : edges_) {
    adj_[index_of(a)][index_of(b)] = true;
    adj_[index_of(b)][index_of(a)] = true;
  }

  // Connectivity check; on failure report the components.
  std::vector<int> comp(n, -1);
  int n_comp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = n_comp;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (adj_[u][v] && comp[v] < 0) {
          comp[v] = n_comp;
          stack.push_back(v);
        }
    }
    ++n_comp;
  }
  if (n_comp > 1) {
    std::ostringstream os;
    os << "graph: disconnected (" << n_comp << " components):";
    for (int c = 0; c < n_comp; ++c) {
      os << " {";
      bool first = true;
      for (int u = 0; u < n; ++u)
        if (comp[u] == c) {
          if (!first) os << ",";
          os << nodes_[u];
          first = false;
        }
      os << "}";
    }
    throw std::invalid_argument(os.str());
  }
}

bool InterferenceGraph::has_node(int b) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), b);
}

int InterferenceGraph::index_of(int b) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), b);
  if (it == nodes_.end() || *it != b) {
    std::ostringstream os;
    os << "graph: unknown node " << b;
    throw std::invalid_argument(os.str());
  }
  return static_cast<int>(it - nodes_.begin());
}

bool InterferenceGraph::adjacent(int a, int b) const {
  return adj_[index_of(a)][index_of(b)];
}

int InterferenceGraph::degree(int b) const {
  const auto& row = adj_[index_of(b)];
  return static_cast<int>(std::count(row.begin(), row.end(), true));
}

std::vector<int> InterferenceGraph::neighbors(int b) const {
  std::vector<int> out;
  int bi = index_of(b);
  for (int v = 0; v < num_nodes(); ++v)
    if (adj_[bi][v]) out.push_back(nodes_[v]);
  return out;
}

std::vector<int> InterferenceGraph::closed_neighborhood(int b) const {
  std::vector<int> out = neighbors(b);
  out.push_back(b);
  std::sort(out.begin(), out.end());
  return out;
}

InterferenceGraph InterferenceGraph::induced_subgraph(
    const std::vector<int>& subset) const {
  std::set<int> keep(subset.begin(), subset.end());
  std::vector<std::pair<int, int>> kept_edges;
  for (auto [a, b] : edges_)
    if (keep.count(a) && keep.count(b)) kept_edges.push_back({a, b});
  return InterferenceGraph(std::vector<int>(keep.begin(), keep.end()), kept_edges);
}

int MixingMatrix::index_of(int node) const {
  auto it = std::lower_bound(support.begin(), support.end(), node);
  if (it == support.end() || *it != node)
    throw std::invalid_argument("mixing matrix: node outside support");
  return static_cast<int>(it - support.begin());
}

MixingMatrix build_mixing_matrix(const InterferenceGraph& g) {
  MixingMatrix W;
  W.support = g.nodes();
  const int n = g.num_nodes();
  W.weights = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) {
    W.weights(0, 0) = 1.0;
    W.theta = 1.0;
    return W;
  }

  const int E = g.num_edges();
  int max_degree = 0;
  for (int id : g.nodes()) max_degree = std::max(max_degree, g.degree(id));
  // Denominator |E| normally; |E|+1 when some diagonal entry would be zero.
  const double denom = (max_degree == E) ? E + 1 : E;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int a = g.nodes()[i], b = g.nodes()[j];
      if (i == j)
        W.weights(i, j) = (denom - g.degree(a)) / denom;
      else if (g.adjacent(a, b))
        W.weights(i, j) = 1.0 / denom;
    }
  }

  W.theta = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (W.weights(i, j) > 0.0) W.theta = std::min(W.theta, W.weights(i, j));
  return W;
}

MixingMatrix build_local_mixing_matrix(const InterferenceGraph& g, int b) {
  return build_mixing_matrix(g.induced_subgraph(g.closed_neighborhood(b)));
}

std::string StochasticityReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail") << ": max row err " << max_row_error
     << ", max col err " << max_col_error << ", min positive " << min_positive
     << ", support mismatches " << support_mismatches.size();
  return os.str();
}

StochasticityReport validate_doubly_stochastic(const MixingMatrix& W,
                                               const InterferenceGraph& g,
                                               double tol) {
  StochasticityReport rep;
  const int n = W.size();
  rep.min_positive = 1.0;
  for (int i = 0; i < n; ++i) {
    rep.max_row_error =
        std::max(rep.max_row_error, std::abs(W.weights.row(i).sum() - 1.0));
    rep.max_col_error =
        std::max(rep.max_col_error, std::abs(W.weights.col(i).sum() - 1.0));
    for (int j = 0; j < n; ++j) {
      double w = W.weights(i, j);
      if (w > 0.0) rep.min_positive = std::min(rep.min_positive, w);
      int a = W.support[i], bnode = W.support[j];
      bool edge = (i == j) || (g.has_node(a) && g.has_node(bnode) &&
                               g.adjacent(a, bnode));
      // positive entries must sit on closed-neighborhood positions and
      // vice versa (within the support subgraph)
      if ((w > 0.0) != edge) rep.support_mismatches.push_back({a, bnode});
    }
  }
  bool nonneg = (W.weights.array() >= 0.0).all();
  rep.pass = nonneg && rep.max_row_error <= tol && rep.max_col_error <= tol &&
             rep.support_mismatches.empty() && rep.min_positive > 0.0;
  return rep;
}

std::vector<double> consensus_decay_probe(const MixingMatrix& W, int n_max) {
  const int n = W.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> out;
  out.reserve(n_max);
  for (int k = 1; k <= n_max; ++k) {
    P = P * W.weights;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P - J);
    out.push_back(svd.singularValues()(0));
  }
  return out;
}

}  // namespace dsca
