#include "dsca/projection.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dsca {

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double cap) {
  if (cap < 0.0) throw std::invalid_argument("projection: negative cap");
  Eigen::VectorXd clipped = v.cwiseMax(0.0);
  if (clipped.sum() <= cap) return clipped;

  // Active budget: project v onto {v >= 0, sum(v) = cap}.
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, theta = 0.0;
  for (int k = 0; k < n; ++k) {
    cumsum += u[k];
    double t = (cumsum - cap) / (k + 1);
    if (u[k] - t > 0.0)
      theta = t;
    else
      break;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

Eigen::VectorXd project_power(const Eigen::VectorXd& v, double budget) {
  if (budget <= 0.0) throw std::invalid_argument("projection: budget must be positive");
  return project_capped_simplex(v, budget);
}

}  // namespace dsca
