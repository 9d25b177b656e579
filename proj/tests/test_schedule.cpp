#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dsca/schedule.hpp"

using namespace dsca;

TEST_CASE("step size and companion schedules evaluate the power laws") {
  ScheduleSet s;
  s.alpha0 = 0.99;
  s.beta = 0.53;
  CHECK(s.alpha(0) == doctest::Approx(0.99));
  CHECK(s.alpha(99) == doctest::Approx(0.99 / std::pow(100.0, 0.53)));

  ScheduleSet unit;
  unit.alpha0 = 1.0;
  unit.beta = 1.0;
  CHECK(unit.alpha(1) == doctest::Approx(0.5));

  s.eps0 = 2.0;
  s.gamma = 0.5;
  CHECK(s.eps(4) == doctest::Approx(1.0));
  s.eps0 = 0.0;
  CHECK(s.eps(4) == 0.0);

  s.L0 = 3.0;
  s.lambda = 0.5;
  CHECK(s.envelope_L(4) == doctest::Approx(6.0));

  s.tau0 = 1.0;
  s.delta = 0.5;
  CHECK(s.tau(4) == doctest::Approx(0.5));
  CHECK(s.tau(1) == doctest::Approx(1.0));
}

namespace {

ScheduleSet with_bld(double beta, double lambda, double delta) {
  ScheduleSet s;
  s.alpha0 = 0.9;
  s.beta = beta;
  s.lambda = lambda;
  s.delta = delta;
  s.L0 = lambda > 0.0 ? 1.0 : 0.0;  // smoothing active iff lambda > 0
  s.tau0 = 1.0;
  return s;
}

}  // namespace

TEST_CASE("schedule gate accepts the published tuples") {
  CHECK(validate_schedules(with_bld(0.9, 0.05, 0.1)).pass);
  CHECK(validate_schedules(with_bld(0.53, 0.0, 0.0)).pass);
  // degenerate smooth case: exactly 0.5 < beta <= 1
  CHECK(validate_schedules(with_bld(1.0, 0.0, 0.0)).pass);
  CHECK_FALSE(validate_schedules(with_bld(0.5, 0.0, 0.0)).pass);
  CHECK_FALSE(validate_schedules(with_bld(1.5, 0.0, 0.0)).pass);
}

TEST_CASE("schedule gate rejects (0.6, 0.2, 0.2) naming the failed inequality") {
  ScheduleReport rep = validate_schedules(with_bld(0.6, 0.2, 0.2));
  CHECK_FALSE(rep.pass);
  const ScheduleCheck* c = rep.find("beta-3lambda-delta>1/2");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
  CHECK(rep.summary().find("beta-3lambda-delta>1/2") != std::string::npos);
}

TEST_CASE("lambda must be positive exactly when smoothing is active") {
  ScheduleSet s = with_bld(0.9, 0.05, 0.0);
  s.L0 = 0.0;  // lambda > 0 but no smoothing
  CHECK_FALSE(validate_schedules(s).pass);

  s = with_bld(0.9, 0.0, 0.0);
  s.L0 = 2.0;  // smoothing but constant L
  CHECK_FALSE(validate_schedules(s).pass);
}

TEST_CASE("inexactness requires gamma > 1 - beta") {
  ScheduleSet s = with_bld(0.6, 0.0, 0.0);
  s.eps0 = 1.0;
  s.gamma = 0.39;
  ScheduleReport rep = validate_schedules(s);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.find("gamma>1-beta") != nullptr);
  CHECK_FALSE(rep.find("gamma>1-beta")->pass);

  s.gamma = 0.41;
  CHECK(validate_schedules(s).pass);

  // exact solves: the gamma condition is not applicable
  s.eps0 = 0.0;
  s.gamma = 0.0;
  CHECK(validate_schedules(s).pass);
  CHECK(validate_schedules(s).find("gamma>1-beta") == nullptr);
}

TEST_CASE("basic coefficient gates") {
  ScheduleSet s = with_bld(0.9, 0.0, 0.0);
  s.alpha0 = 0.0;
  CHECK_FALSE(validate_schedules(s).pass);
  s.alpha0 = 1.5;
  CHECK_FALSE(validate_schedules(s).pass);
  s = with_bld(0.9, 0.0, 0.0);
  s.tau0 = 0.0;
  CHECK_FALSE(validate_schedules(s).pass);
}
