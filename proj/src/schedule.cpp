#include "dsca/schedule.hpp"

#include <sstream>

namespace dsca {

const ScheduleCheck* ScheduleReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ScheduleReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail");
  for (const auto& c : checks)
    if (!c.pass) os << "; " << c.name << " violated (" << c.detail << ")";
  return os.str();
}

ScheduleReport validate_schedules(const ScheduleSet& s) {
  ScheduleReport rep;
  auto add = [&rep](const std::string& name, bool pass, double lhs, double rhs,
                    const char* op) {
    std::ostringstream os;
    os << lhs << " " << op << " " << rhs;
    rep.checks.push_back({name, pass, os.str()});
  };

  add("alpha0 in (0,1]", s.alpha0 > 0.0 && s.alpha0 <= 1.0, s.alpha0, 1.0, "<=");
  add("tau0 > 0", s.tau0 > 0.0, s.tau0, 0.0, ">");
  add("delta >= 0", s.delta >= 0.0, s.delta, 0.0, ">=");
  add("beta-2lambda>2delta", s.beta - 2.0 * s.lambda > 2.0 * s.delta,
      s.beta - 2.0 * s.lambda, 2.0 * s.delta, ">");
  add("beta-3lambda-delta>1/2", s.beta - 3.0 * s.lambda - s.delta > 0.5,
      s.beta - 3.0 * s.lambda - s.delta, 0.5, ">");
  add("beta+delta<=1", s.beta + s.delta <= 1.0, s.beta + s.delta, 1.0, "<=");
  add("0<=lambda<1", s.lambda >= 0.0 && s.lambda < 1.0, s.lambda, 1.0, "<");
  // Smoothing needs L[n] -> infinity; without smoothing lambda must stay 0.
  add("lambda>0 iff smoothing", s.smoothing_active() == (s.lambda > 0.0),
      s.lambda, 0.0, s.smoothing_active() ? ">" : "==");
  if (s.smoothing_active())
    add("L0 > 0", s.L0 > 0.0, s.L0, 0.0, ">");
  if (s.inexact())
    add("gamma>1-beta", s.gamma > 1.0 - s.beta, s.gamma, 1.0 - s.beta, ">");

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace dsca
