// Copyright 2026 The Airborne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "airborne/errors.h"
#include "airborne/phli.h"
#include "airborne/physics.h"
#include "airborne/planner.h"
#include "doctest.h"

namespace ab = airborne;

namespace {

ab::PhysicalParams quiet() {
  ab::PhysicalParams p;
  p.yaw_noise_std = 0.0;
  return p;
}

ab::PlannerConfig small_planner(int n) {
  ab::PlannerConfig cfg;
  cfg.sample_count = n;
  cfg.seed = 1;
  return cfg;
}

bool within_limits(const ab::VehicleState& s, const ab::ActuationLimits& l) {
  return s.rpm >= l.rpm_min && s.rpm <= l.rpm_max && s.steer >= l.steer_min &&
         s.steer <= l.steer_max && s.roll > -ab::kPi && s.roll <= ab::kPi &&
         s.pitch > -ab::kPi && s.pitch <= ab::kPi;
}

}  // namespace

TEST_CASE("horizon rounds half up with a floor of one") {
  CHECK(ab::horizon(2.0, 0.2) == 10);
  CHECK(ab::horizon(0.05, 0.2) == 1);
  CHECK(ab::horizon(1.9, 0.2) == 10);
  CHECK(ab::horizon(0.3, 0.2) == 2);
}

TEST_CASE("action sampling box") {
  ab::PlannerConfig cfg = small_planner(2000);
  ab::Rng rng(3);
  const auto s = ab::sample_actions({4900.0, 0.0}, cfg, rng);
  REQUIRE(s.size() == 2000);
  for (const auto& a : s) {
    CHECK(a.rpm_rate >= 2900.0);
    CHECK(a.rpm_rate <= 5000.0);
    CHECK(std::abs(a.steer_rate) <= 0.2);
  }
  ab::Rng r1(9), r2(9);
  CHECK(ab::sample_actions({}, cfg, r1) == ab::sample_actions({}, cfg, r2));
}

TEST_CASE("rollout holds the action and clamps every step") {
  const ab::OracleForwardModel m(quiet(), {}, 0.2);
  const ab::Trajectory still = ab::rollout({}, {}, 5, m);
  REQUIRE(still.states.size() == 6);
  for (const auto& s : still.states) CHECK(s == ab::VehicleState{});

  ab::VehicleState s0;
  s0.rpm = 1500.0;
  const ab::Trajectory t = ab::rollout({5000.0, 0.0}, s0, 4, m);
  CHECK(t.states[0].rpm == 1500.0);
  for (int k = 1; k <= 4; ++k) CHECK(t.states[k].rpm == 1980.0);
  CHECK(t.actions[0].rpm_rate == doctest::Approx(2400.0));
  CHECK(t.actions[1].rpm_rate == 0.0);
}

TEST_CASE("rollout under the learned model is its step composition") {
  auto model = std::make_shared<const ab::PhliModel>(
      ab::PhliModel::random({10, 16, 16, 16, 3}, 0.2, 5));
  const ab::PhliForwardModel fm(model, {});
  ab::VehicleState s{0.1, 0.2, -0.1, 0.0, 0.0, 0.0, 900.0, 0.1};
  const ab::Action a{800.0, -1.0};
  const ab::Trajectory t = ab::rollout(a, s, 6, fm);
  ab::VehicleState x = s;
  for (int k = 1; k <= 6; ++k) {
    x = ab::phli_step(*model, x, a, {});
    CHECK(t.states[k] == x);
  }
}

TEST_CASE("cost closed forms") {
  ab::CostSchedule sched;
  for (auto& w : sched.weights) w = {{0.0, 0.0}};
  sched.weights[ab::kRoll] = {{0.0, 2.5}};
  sched.scales.fill(1.0);
  ab::Trajectory t;
  ab::VehicleState s;
  s.roll = 0.3;
  t.states.assign(7, s);
  const ab::GoalState g;
  CHECK(ab::calculate_cost(t, g, sched) ==
        doctest::Approx(7 * 2.5 * 0.09).epsilon(1e-14));
  CHECK(ab::calculate_cost(t, ab::GoalState(s), sched) == 0.0);
  CHECK(ab::calculate_cost(t, g, sched.scaled(2.0)) ==
        doctest::Approx(2.0 * ab::calculate_cost(t, g, sched)).epsilon(1e-15));
  t.states.resize(1);
  CHECK_THROWS_AS(ab::calculate_cost(t, g, sched), ab::ArgumentError);
}

TEST_CASE("schedule validation") {
  const ab::CostSchedule d = ab::CostSchedule::defaults({});
  CHECK_NOTHROW(d.validate());
  CHECK(d.weight(ab::kRoll, 0.0) == 1.0);
  CHECK(d.weight(ab::kRpm, 0.1) == 0.0);
  ab::CostSchedule bad = d;
  bad.weights[ab::kRoll] = {{0.0, -1.0}};
  CHECK_THROWS_AS(bad.validate(), ab::ConfigError);
  ab::CostSchedule none = d;
  for (auto& w : none.weights) w = {{0.0, 0.0}};
  CHECK_THROWS_AS(none.validate(), ab::ConfigError);
}

TEST_CASE("goal equal to equilibrium keeps still") {
  const ab::OracleForwardModel m(quiet(), {}, 0.2);
  ab::VehicleState s;
  s.rpm = 1000.0;
  ab::Rng rng(4);
  ab::PlannerConfig cfg = small_planner(500);
  const ab::PlanResult r =
      ab::plan_cycle(s, ab::GoalState(s), 1.0, {}, m, cfg,
                     ab::CostSchedule::defaults({}), rng);
  CHECK(r.feasible);
  CHECK(std::abs(r.best_action.rpm_rate) < 200.0);
  CHECK(std::abs(r.best_action.steer_rate) < 0.05);
  CHECK(r.best_cost < 1e-2);
  CHECK_THROWS_AS(ab::plan_cycle(s, ab::GoalState(s), 0.0, {}, m, cfg,
                                 ab::CostSchedule::defaults({}), rng),
                  ab::PlanningWindowExpired);
}

TEST_CASE("identical candidates select the first") {
  const ab::OracleForwardModel m(quiet(), {}, 0.2);
  const std::vector<ab::Action> same(10, ab::Action{300.0, 0.1});
  ab::VehicleState s;
  s.rpm = 800.0;
  ab::GoalState g;
  g.roll = 0.2;
  const ab::PlanResult r = ab::evaluate_candidates(
      s, g, 1.0, same, m, small_planner(10), ab::CostSchedule::defaults({}));
  CHECK(r.best_index == 0);
  CHECK(r.best_action == same[0]);
}

TEST_CASE("selection equals exhaustive search over injected grids") {
  const ab::OracleForwardModel m(quiet(), {}, 0.2);
  const ab::CostSchedule sched = ab::CostSchedule::defaults({});
  const ab::PlannerConfig cfg = small_planner(9);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(-0.5, 0.5), rate(-2, 2),
      rpm(0, 1980), steer(-0.65, 0.65), t(0.05, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    const ab::VehicleState s{ang(rng), rate(rng), ang(rng), rate(rng),
                             0.0, 0.0, rpm(rng), steer(rng)};
    ab::GoalState g;
    g.roll = ang(rng);
    g.pitch = ang(rng);
    g.rpm = 1000.0;
    const double tr = t(rng);
    std::vector<ab::Action> grid;
    for (double r : {-4000.0, 0.0, 4000.0})
      for (double q : {-5.0, 0.0, 5.0}) grid.push_back({r, q});
    const ab::PlanResult got =
        ab::evaluate_candidates(s, g, tr, grid, m, cfg, sched);

    const int h = ab::horizon(tr, 0.2);
    std::vector<ab::Trajectory> trajs;
    for (const auto& a : grid) trajs.push_back(ab::rollout(a, s, h, m));
    auto best_for = [&](const ab::GoalState& goal) {
      std::size_t best = 0;
      double bc = ab::calculate_cost(trajs[0], goal, sched);
      for (std::size_t i = 1; i < trajs.size(); ++i) {
        const double c = ab::calculate_cost(trajs[i], goal, sched);
        if (c < bc) {
          bc = c;
          best = i;
        }
      }
      return best;
    };
    std::size_t want = best_for(g);
    const ab::VehicleState& term = trajs[want].states.back();
    if (!ab::within_tolerance(term, g, cfg.feasibility_tolerance)) {
      want = best_for(ab::alternate_goal(g, term));
    }
    CHECK(got.best_index == want);
    CHECK(got.best_trajectory.states == trajs[want].states);
  }
}

TEST_CASE("planning is invariant to weight scaling and worker count") {
  auto model = std::make_shared<const ab::PhliModel>(
      ab::PhliModel::random({10, 16, 16, 16, 3}, 0.2, 8));
  const ab::PhliForwardModel fm(model, {});
  const ab::CostSchedule sched = ab::CostSchedule::defaults({});
  ab::VehicleState s{0.2, -0.5, 0.1, 0.3, 0.0, 0.0, 1100.0, -0.2};
  ab::GoalState g;
  g.rpm = 1000.0;
  ab::PlannerConfig cfg = small_planner(700);
  ab::Rng r1(5), r2(5), r3(5);
  const ab::PlanResult a = ab::plan_cycle(s, g, 1.2, {}, fm, cfg, sched, r1);
  const ab::PlanResult b =
      ab::plan_cycle(s, g, 1.2, {}, fm, cfg, sched.scaled(3.5), r2);
  cfg.workers = 4;
  const ab::PlanResult c = ab::plan_cycle(s, g, 1.2, {}, fm, cfg, sched, r3);
  CHECK(a.best_index == b.best_index);
  CHECK(a.best_index == c.best_index);
  CHECK(a.best_cost == c.best_cost);
  CHECK(a.best_trajectory.states == c.best_trajectory.states);
}

TEST_CASE("alternate goal and tolerance") {
  ab::GoalState g;
  g.roll = 0.5;
  ab::VehicleState term;
  term.roll = 0.1;
  term.rpm = 1500.0;
  const ab::StateVector tol{0.1, 0.3, 0.1, 0.3, ab::kUnbounded, ab::kUnbounded,
                            ab::kUnbounded, ab::kUnbounded};
  CHECK_FALSE(ab::within_tolerance(term, g, tol));
  CHECK(ab::within_tolerance(ab::GoalState(term), g, tol) ==
        ab::within_tolerance(term, g, tol));
  term.roll = 0.45;
  CHECK(ab::within_tolerance(term, g, tol));
}

TEST_CASE("closed loop reaches a stationary goal and obeys limits") {
  const auto oracle = std::make_shared<ab::OracleForwardModel>(quiet(),
                                                               ab::ActuationLimits{}, 0.2);
  ab::PlannerConfig cfg = small_planner(300);
  ab::VehicleState s;
  s.rpm = 1000.0;
  const ab::PhysicalParams p = quiet();
  const ab::EnvironmentStep env = [&](const ab::VehicleState& x,
                                      const ab::Action& a, double dt) {
    return ab::step(x, a, dt, p, {});
  };
  ab::Rng rng(2);
  const ab::ControlLoopResult r = ab::control_loop(
      s, ab::GoalState(s), 2.0, *oracle, cfg, ab::CostSchedule::defaults({}),
      env, rng);
  CHECK(r.cycles.size() == 100);
  CHECK(r.cycles.front().horizon == 10);
  CHECK(r.cycles.back().horizon == 1);
  for (std::size_t i = 1; i < r.cycles.size(); ++i) {
    CHECK(r.cycles[i].horizon <= r.cycles[i - 1].horizon);
  }
  for (const auto& x : r.executed.states) CHECK(within_limits(x, {}));
  const ab::VehicleState& end = r.executed.states.back();
  CHECK(std::abs(end.roll) < 0.05);
  CHECK(std::abs(end.pitch) < 0.05);
  CHECK(ab::cycle_count(2.0, 50.0) == 100);
}

TEST_CASE("warm start keeps the previous best inside the sampling box") {
  ab::PlannerConfig cfg = small_planner(64);
  ab::Rng rng(6);
  ab::Action best{-4500.0, 6.0};
  for (int k = 0; k < 20; ++k) {
    const auto s = ab::sample_actions(best, cfg, rng);
    for (const auto& a : s) {
      CHECK(std::abs(a.rpm_rate - best.rpm_rate) <= cfg.sigma_rpm_rate);
      CHECK(std::abs(a.steer_rate - best.steer_rate) <= cfg.sigma_steer_rate);
    }
    best = s[k % s.size()];
  }
}
