#pragma once

#include <Eigen/Dense>

namespace dsca {

// Euclidean projection onto {v : v >= 0, sum(v) <= cap}. Sort-based, exact.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double cap);

// Projection realizing the per-channel allocation constraint
// {x in [0,1]^n : sum(x) <= 1}. The unit box is implied by the simplex cap.
inline Eigen::VectorXd project_allocation_channel(const Eigen::VectorXd& v) {
  return project_capped_simplex(v, 1.0);
}

// Projection realizing the power budget {p >= 0 : sum(p) <= P}.
Eigen::VectorXd project_power(const Eigen::VectorXd& v, double budget);

}  // namespace dsca
