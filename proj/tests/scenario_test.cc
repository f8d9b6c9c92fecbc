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
#include <vector>

#include "airborne/errors.h"
#include "airborne/physics.h"
#include "airborne/scenario.h"
#include "doctest.h"

namespace ab = airborne;

namespace {

ab::ScenarioSpec spec_for(ab::ScenarioKind kind) {
  ab::ScenarioSpec s;
  s.kind = kind;
  return s;
}

std::unique_ptr<ab::DomController> oracle_dom(int samples) {
  ab::PhysicalParams quiet;
  quiet.yaw_noise_std = 0.0;
  auto model = std::make_shared<ab::OracleForwardModel>(quiet,
                                                        ab::ActuationLimits{}, 0.2);
  ab::PlannerConfig cfg;
  cfg.sample_count = samples;
  return std::make_unique<ab::DomController>(model, cfg,
                                             ab::CostSchedule::flight({}));
}

}  // namespace

TEST_CASE("scenario names round trip") {
  for (auto k : {ab::ScenarioKind::kTT, ab::ScenarioKind::kRSC,
                 ab::ScenarioKind::kTGR, ab::ScenarioKind::kSS,
                 ab::ScenarioKind::kRamp}) {
    CHECK(ab::parse_scenario(ab::scenario_name(k)) == k);
  }
  CHECK_THROWS_AS(ab::parse_scenario("loop"), ab::ArgumentError);
}

TEST_CASE("zero controller tracking error is the mean curve amplitude") {
  ab::ZeroController zero;
  const ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kTT);
  const ab::TrialResult r = ab::run_trial(zero, s, 3);
  // Mean of |A sin| over whole periods.
  CHECK(r.values.at("TT Error (rad)")[0] ==
        doctest::Approx(2.0 * s.tt_amplitude / ab::kPi).epsilon(1e-3));
  CHECK_FALSE(r.success);
  CHECK(r.censored.at("TT Completion Time (sec)") == 1);
}

TEST_CASE("scenario runs are deterministic") {
  ab::PidController pid(ab::PidGains::defaults(), {}, 0.02);
  for (auto k : {ab::ScenarioKind::kTT, ab::ScenarioKind::kRSC,
                 ab::ScenarioKind::kTGR, ab::ScenarioKind::kSS}) {
    const ab::ScenarioSpec s = spec_for(k);
    const ab::TrialResult a = ab::run_trial(pid, s, 5);
    const ab::TrialResult b = ab::run_trial(pid, s, 5);
    CHECK(a.values == b.values);
    CHECK(a.log.states == b.log.states);
  }
}

TEST_CASE("zero controller never reaches rapid state change goals") {
  ab::ZeroController zero;
  const ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kRSC);
  const ab::TrialResult r = ab::run_trial(zero, s, 1);
  CHECK_FALSE(r.success);
  CHECK(r.censored.at("RSC Time (sec)") == s.rsc_goal_count);
}

TEST_CASE("episode log matches a direct open-loop simulation") {
  std::vector<ab::Action> script;
  for (int k = 0; k < 300; ++k) {
    script.push_back({k < 100 ? 2000.0 : -1500.0, k % 40 < 20 ? 1.0 : -1.0});
  }
  ab::ScriptedController c(script);
  const ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kRSC);
  const ab::TrialResult r = ab::run_trial(c, s, 2);
  ab::PhysicalParams quiet = s.env_params;
  quiet.yaw_noise_std = 0.0;
  const std::size_t n = std::min<std::size_t>(script.size(), r.log.actions.size());
  const std::vector<ab::Action> applied(r.log.actions.begin(),
                                        r.log.actions.begin() + n);
  const ab::Trajectory t =
      ab::simulate(r.log.states[0], applied, s.control_period(), quiet, s.limits);
  for (std::size_t k = 0; k <= n; ++k) {
    CHECK(t.states[k].roll == doctest::Approx(r.log.states[k].roll).epsilon(1e-12));
    CHECK(t.states[k].pitch == doctest::Approx(r.log.states[k].pitch).epsilon(1e-12));
    CHECK(t.states[k].rpm == r.log.states[k].rpm);
  }
}

TEST_CASE("timed goal equal to the start has no time difference") {
  ab::ZeroController zero;
  ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kTGR);
  s.tgr_goal_range = 0.0;
  const ab::TrialResult r = ab::run_trial(zero, s, 4);
  CHECK(r.values.at("TGR Time Difference (sec)")[0] == 0.0);
  CHECK(r.values.at("TGR State Difference (rad)")[0] == 0.0);
  CHECK(r.success);
  CHECK(r.certified);
}

TEST_CASE("reachability check") {
  ab::PhysicalParams p;
  ab::VehicleState s;
  s.rpm = 1000.0;
  ab::GoalState same(s);
  CHECK(ab::check_reachability(s, same, 1.0, p, {}, 0.02, 0.1, 1).reachable);

  ab::GoalState near;
  near.roll = 0.3;
  near.rpm = 1000.0;
  const ab::ReachabilityResult ok =
      ab::check_reachability(s, near, 1.5, p, {}, 0.02, 0.1, 1);
  CHECK(ok.reachable);
  CHECK(ok.best_error < 0.1);
  // Replaying the certified schedule lands inside the tolerance.
  ab::PhysicalParams quiet = p;
  quiet.yaw_noise_std = 0.0;
  const ab::Trajectory t = ab::simulate(s, ok.schedule, 0.02, quiet, {});
  CHECK(std::abs(ab::wrap_angle(t.states.back().roll - 0.3)) < 0.1);

  ab::GoalState far;
  far.roll = 3.0;
  far.pitch = -3.0;
  const ab::ReachabilityResult no =
      ab::check_reachability(s, far, 0.3, p, {}, 0.02, 0.1, 1);
  CHECK_FALSE(no.reachable);
  CHECK(no.best_error > 0.1);
}

TEST_CASE("state stability bookkeeping") {
  ab::ZeroController zero;
  ab::ScenarioSpec calm = spec_for(ab::ScenarioKind::kSS);
  calm.ss_disturbances.clear();
  const ab::TrialResult a = ab::run_trial(zero, calm, 1);
  CHECK(a.values.at("SS Correction Time (sec)") == std::vector<double>{0.0});
  CHECK(a.success);

  ab::ScenarioSpec kicked = spec_for(ab::ScenarioKind::kSS);
  kicked.ss_disturbances = {{2.0, 0, 0.5}};
  const ab::TrialResult b = ab::run_trial(zero, kicked, 1);
  CHECK_FALSE(b.success);
  CHECK(b.censored.at("SS Correction Time (sec)") == 1);
  CHECK(b.values.at("SS Correction Time (sec)")[0] ==
        doctest::Approx(kicked.ss_hold - 2.0));
}

TEST_CASE("planner recovers from a roll impulse no faster than physics allows") {
  auto dom = oracle_dom(200);
  ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kSS);
  s.ss_hold = 4.0;
  s.ss_disturbances = {{1.0, 0, 0.5}};
  const ab::TrialResult r = ab::run_trial(*dom, s, 7);
  CHECK(r.success);
  const double t = r.values.at("SS Correction Time (sec)")[0];
  const double bound = ab::min_correction_time_bound(0.5 - s.thresholds.rate, 0,
                                                     s.env_params, s.limits);
  CHECK(bound > 0.0);
  CHECK(t >= bound);
  CHECK(r.censored.count("SS Correction Time (sec)") == 0);
}

TEST_CASE("ramp landing") {
  ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kRamp);
  CHECK(ab::projectile_airtime(s.ramp_speed, s.ramp_angle, s.ramp_height_delta,
                               s.env_params.gravity) ==
        doctest::Approx(2.018).epsilon(5e-4));
  // Launch exactly at the goal attitude: nothing to correct.
  s.launch_angle_std = 0.0;
  s.launch_rate_std = 0.0;
  s.ramp_goal.pitch = s.ramp_angle;
  ab::ZeroController zero;
  const ab::TrialResult r = ab::run_trial(zero, s, 1);
  CHECK(r.certified);
  CHECK(r.values.at("Ramp Landing Roll (rad)")[0] < 1e-12);
  CHECK(r.values.at("Ramp Landing Pitch (rad)")[0] < 1e-12);
  CHECK(r.success);
}

TEST_CASE("metrics aggregate with explicit censoring") {
  ab::ZeroController zero;
  const ab::ScenarioSpec s = spec_for(ab::ScenarioKind::kTT);
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const ab::Metrics m = ab::run_scenario(zero, s, seeds);
  CHECK(m.trials == 3);
  CHECK(m.successes == 0);
  CHECK(m.success_rate() == 0.0);
  const ab::MetricStat* ct = m.find("TT Completion Time (sec)");
  REQUIRE(ct != nullptr);
  CHECK(ct->censored == 3);
  CHECK(ct->values.empty());
  REQUIRE(m.stats.size() == ab::metric_rows(ab::ScenarioKind::kTT).size());
  for (std::size_t i = 0; i < m.stats.size(); ++i) {
    CHECK(m.stats[i].name == ab::metric_rows(ab::ScenarioKind::kTT)[i]);
  }
}

TEST_CASE("comparison table covers every requested cell") {
  ab::ZeroController zero;
  ab::PidController pid(ab::PidGains::defaults(), {}, 0.02);
  std::vector<ab::ScenarioSpec> specs{spec_for(ab::ScenarioKind::kTGR),
                                      spec_for(ab::ScenarioKind::kRamp)};
  std::vector<ab::Controller*> controllers{&pid, &zero};
  const std::vector<std::uint64_t> one{9};
  const ab::ComparisonTable t = ab::compare(specs, controllers, one);
  CHECK(t.controllers == std::vector<std::string>{"pid", "zero"});
  REQUIRE(t.metrics.size() == 4);
  for (const ab::Metrics& m : t.metrics) {
    CHECK(m.trials == 1);
    for (const ab::MetricStat& st : m.stats) CHECK(st.stddev() == 0.0);
  }
}

TEST_CASE("spec validation") {
  ab::ScenarioSpec s;
  CHECK_NOTHROW(s.validate());
  s.control_hz = 0.0;
  CHECK_THROWS_AS(s.validate(), ab::ConfigError);
  s = {};
  s.tgr_time_max = 1.0;
  CHECK_THROWS_AS(s.validate(), ab::ConfigError);
}
