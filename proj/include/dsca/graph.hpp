#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace dsca {

// Undirected interference graph over base stations. Edges are mutual,
// self-loops are rejected and the graph must be connected.
class InterferenceGraph {
 public:
  InterferenceGraph(std::vector<int> node_ids,
                    const std::vector<std::pair<int, int>>& edge_list);

  const std::vector<int>& nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  bool has_node(int b) const;
  int index_of(int b) const;  // position in nodes(), throws if unknown
  bool adjacent(int a, int b) const;
  int degree(int b) const;

  // N(b): neighbors of b, excluding b itself. Sorted by node id.
  std::vector<int> neighbors(int b) const;
  // Nb(b) = N(b) ∪ {b}. Sorted by node id.
  std::vector<int> closed_neighborhood(int b) const;

  // Subgraph induced by the given node subset (edges with both endpoints
  // inside). Throws if the result is disconnected.
  InterferenceGraph induced_subgraph(const std::vector<int>& subset) const;

 private:
  std::vector<int> nodes_;                     // sorted
  std::vector<std::pair<int, int>> edges_;     // normalized (a < b), sorted
  std::vector<std::vector<bool>> adj_;         // by node index
};

// Doubly stochastic consensus weights over a (sub)graph.
struct MixingMatrix {
  std::vector<int> support;  // node ids the matrix ranges over, sorted
  Eigen::MatrixXd weights;   // square, indexed by position in support
  double theta = 0.0;        // min positive entry of the construction

  int size() const { return static_cast<int>(support.size()); }
  int index_of(int node) const;
};

// Uniform edge-weight construction: W_ij = 1/|E| on edges and
// W_ii = (|E|-d_i)/|E|. Falls back to the |E|+1 denominator variant when
// any diagonal entry would vanish (e.g. the center of a star).
MixingMatrix build_mixing_matrix(const InterferenceGraph& g);

// Mixing matrix supported on Nb(b), built from the subgraph induced by the
// closed neighborhood.
MixingMatrix build_local_mixing_matrix(const InterferenceGraph& g, int b);

struct StochasticityReport {
  double max_row_error = 0.0;
  double max_col_error = 0.0;
  double min_positive = 0.0;
  // (i, j) node-id pairs where the sparsity pattern disagrees with the graph.
  std::vector<std::pair<int, int>> support_mismatches;
  bool pass = false;
  std::string summary() const;
};

// Checks row/column sums against tol and the sparsity pattern against the
// subgraph of g induced by W.support. Report-only, never throws.
StochasticityReport validate_doubly_stochastic(const MixingMatrix& W,
                                               const InterferenceGraph& g,
                                               double tol);

// d[n] = ||W^n - (1/I)11^T||_2 for n = 1..n_max. Geometric decay with
// ratio below one is what makes consensus work.
std::vector<double> consensus_decay_probe(const MixingMatrix& W, int n_max);

}  // namespace dsca
