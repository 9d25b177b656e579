#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace dsca {

// Power-law schedules for the SCA loop:
//   step size          alpha[n] = alpha0 / (n+1)^beta
//   inexactness        eps[n]   = eps0 / n^gamma      (eps0 = 0: exact solves)
//   envelope Lipschitz L[n]     = L0 * n^lambda       (L0 = 0: no smoothing)
//   strong convexity   tau[n]   = tau0 * n^-delta
struct ScheduleSet {
  double alpha0 = 0.9;
  double beta = 0.6;
  double eps0 = 0.0;
  double gamma = 0.0;
  double L0 = 0.0;
  double lambda = 0.0;
  double tau0 = 1.0;
  double delta = 0.0;

  bool operator==(const ScheduleSet&) const = default;

  bool smoothing_active() const { return L0 > 0.0; }
  bool inexact() const { return eps0 > 0.0; }

  double alpha(int n) const { return alpha0 / std::pow(n + 1.0, beta); }
  double eps(int n) const {
    return eps0 > 0.0 ? eps0 / std::pow(std::max(n, 1) * 1.0, gamma) : 0.0;
  }
  double envelope_L(int n) const {
    return L0 * std::pow(std::max(n, 1) * 1.0, lambda);
  }
  double tau(int n) const {
    return tau0 * std::pow(std::max(n, 1) * 1.0, -delta);
  }
};

struct ScheduleCheck {
  std::string name;    // e.g. "beta-3lambda-delta>1/2"
  bool pass = false;
  std::string detail;  // evaluated inequality
};

struct ScheduleReport {
  std::vector<ScheduleCheck> checks;
  bool pass = false;
  const ScheduleCheck* find(const std::string& name) const;
  std::string summary() const;
};

// Diminishing-step-size conditions for convergence of the (proximal,
// inexact) SCA loop. Report-only.
ScheduleReport validate_schedules(const ScheduleSet& s);

}  // namespace dsca
