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

#ifndef AIRBORNE_SCENARIO_H_
#define AIRBORNE_SCENARIO_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airborne/pid.h"
#include "airborne/physics.h"
#include "airborne/planner.h"
#include "airborne/types.h"

namespace airborne {

enum class ScenarioKind { kTT, kRSC, kTGR, kSS, kRamp };

std::string scenario_name(ScenarioKind kind);  // "tt", "rsc", ...
ScenarioKind parse_scenario(const std::string& name);

struct Thresholds {
  double angle = 0.1;        // rad, "goal reached" on roll and pitch
  double rate = 0.3;         // rad/s, on roll and pitch rates
  double stuck_dwell = 2.0;  // s at an rpm/steer limit counted as stuck
};

struct Disturbance {
  double time = 0.0;     // s after the hold starts
  int axis = 0;          // 0 roll, 1 pitch
  double impulse = 0.0;  // rad/s added to that rate
};

// Everything that defines a scenario run. The same object drives every
// controller so thresholds apply symmetrically.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kTT;
  double control_hz = 50.0;
  Thresholds thresholds;
  PhysicalParams env_params;  // the simulated vehicle
  ActuationLimits limits;

  // Indoor initial states: at rest, rpm uniform in this range, zero steer.
  double init_rpm_min = 800.0;
  double init_rpm_max = 1200.0;
  double goal_rpm = 1000.0;  // wheel speed requested by indoor goals
  // Window handed to fixed-horizon controllers while tracking or holding.
  double plan_window = 0.6;

  // Trajectory tracking: roll = A sin(2 pi t / P), pitch = A sin(4 pi t / P).
  double tt_amplitude = 0.4;
  double tt_period = 20.0;
  double tt_lookahead = 0.4;
  double tt_max_error = 0.2;    // success needs mean error below this
  double tt_settle_time = 5.0;  // after P, to settle on the final point

  // Rapid state change: goals from {-m, 0, m}^2 minus the origin.
  double rsc_magnitude = 0.3;
  int rsc_goal_count = 4;
  double rsc_hold = 2.0;
  double rsc_reach_limit = 6.0;

  // Timed goal reaching.
  double tgr_time_min = 1.5;
  double tgr_time_max = 3.0;
  double tgr_goal_range = 0.5;
  double tgr_post_window = 2.0;

  // State stability.
  double ss_goal_roll = 0.2;
  double ss_goal_pitch = -0.2;
  double ss_hold = 10.0;
  std::vector<Disturbance> ss_disturbances{
      {2.5, 0, 0.5}, {5.5, 1, -0.5}, {8.0, 0, -0.5}};
  // Corrective acceleration (rad/s^2) that counts as a reaction.
  double ss_reaction_floor = 1.0;

  // Ramp flight.
  double ramp_speed = 14.0;
  double ramp_angle = kPi / 4.0;
  double ramp_height_delta = 0.0;
  double launch_angle_std = 0.1;
  double launch_rate_std = 0.3;
  double launch_rpm_min = 1200.0;
  double launch_rpm_max = 1500.0;
  GoalState ramp_goal{VehicleState{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1000.0, 0.0}};
  double ramp_landing_tolerance = 0.15;
  int ramp_max_attempts = 50;

  void validate() const;
  double control_period() const { return 1.0 / control_hz; }
};

// What a controller is asked to do at one tick: reach goal in
// time_to_goal seconds.
struct Target {
  GoalState goal;
  double time_to_goal = 0.0;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  // Clears internal state before a trial.
  virtual void reset(std::uint64_t seed) = 0;
  virtual Action act(const VehicleState& s, const Target& target) = 0;
};

// The sampling planner used as a controller: one plan_cycle per tick,
// warm-started from the previous best action.
class DomController : public Controller {
 public:
  DomController(std::shared_ptr<const ForwardModel> model, PlannerConfig cfg,
                CostSchedule sched);
  std::string name() const override { return "dom"; }
  void reset(std::uint64_t seed) override;
  Action act(const VehicleState& s, const Target& target) override;
  const PlanResult& last_plan() const { return last_plan_; }

 private:
  std::shared_ptr<const ForwardModel> model_;
  PlannerConfig cfg_;
  CostSchedule sched_;
  Rng rng_;
  Action last_best_;
  PlanResult last_plan_;
};

class PidController : public Controller {
 public:
  PidController(PidGains gains, ActuationLimits limits, double dt_control);
  std::string name() const override { return "pid"; }
  void reset(std::uint64_t seed) override;
  Action act(const VehicleState& s, const Target& target) override;

 private:
  PidGains gains_;
  ActuationLimits limits_;
  double dt_;
  PidState state_;
};

class ZeroController : public Controller {
 public:
  std::string name() const override { return "zero"; }
  void reset(std::uint64_t) override {}
  Action act(const VehicleState&, const Target&) override { return {}; }
};

// Replays a fixed action list, then zeros.
class ScriptedController : public Controller {
 public:
  explicit ScriptedController(std::vector<Action> actions)
      : actions_(std::move(actions)) {}
  std::string name() const override { return "scripted"; }
  void reset(std::uint64_t) override { index_ = 0; }
  Action act(const VehicleState&, const Target&) override {
    return index_ < actions_.size() ? actions_[index_++] : Action{};
  }

 private:
  std::vector<Action> actions_;
  std::size_t index_ = 0;
};

// Closed-loop record: states[k] at times[k]; actions[k] applied on
// [times[k], times[k + 1]); goals[k] the target goal at tick k.
struct EpisodeLog {
  std::vector<double> times;
  std::vector<VehicleState> states;
  std::vector<Action> actions;
  std::vector<GoalState> goals;
};

struct TrialResult {
  ScenarioKind kind = ScenarioKind::kTT;
  std::uint64_t seed = 0;
  bool success = false;
  bool certified = true;  // TGR/RAMP: goal passed the reachability check
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, int> censored;
  EpisodeLog log;
};

TrialResult run_tt(Controller& c, const ScenarioSpec& spec, std::uint64_t seed);
TrialResult run_rsc(Controller& c, const ScenarioSpec& spec, std::uint64_t seed);
TrialResult run_tgr(Controller& c, const ScenarioSpec& spec, std::uint64_t seed);
TrialResult run_ss(Controller& c, const ScenarioSpec& spec, std::uint64_t seed);
TrialResult run_ramp(Controller& c, const ScenarioSpec& spec, std::uint64_t seed);
TrialResult run_trial(Controller& c, const ScenarioSpec& spec, std::uint64_t seed);

struct MetricStat {
  std::string name;
  std::vector<double> values;
  int censored = 0;

  double mean() const;
  double stddev() const;  // population
};

// Aggregate over trials of one scenario for one controller.
struct Metrics {
  ScenarioKind kind = ScenarioKind::kTT;
  std::string controller;
  int trials = 0;
  int successes = 0;
  std::vector<MetricStat> stats;  // ordered as the table rows
  std::vector<TrialResult> per_trial;

  const MetricStat* find(const std::string& name) const;
  double success_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
  }
};

// Table rows reported for a scenario, in order.
std::vector<std::string> metric_rows(ScenarioKind kind);
// "TT Success Rate" etc.
std::string success_row(ScenarioKind kind);

Metrics run_scenario(Controller& c, const ScenarioSpec& spec,
                     std::span<const std::uint64_t> seeds);

// Search over piecewise-constant open-loop schedules (four equal segments,
// random shooting including the rate extremes, then pattern-search
// refinement) on the noise-free oracle. Reports whether some schedule brings
// roll and pitch within tolerance of the goal at time horizon.
struct ReachabilityResult {
  bool reachable = false;
  double best_error = 0.0;  // max(|roll|, |pitch|) residual at the horizon
  std::vector<Action> schedule;  // per-control-tick actions of the best
};

ReachabilityResult check_reachability(const VehicleState& s0,
                                      const GoalState& g, double horizon_time,
                                      const PhysicalParams& p,
                                      const ActuationLimits& limits,
                                      double control_dt, double tolerance,
                                      std::uint64_t seed);

// Lower bound on the time to bring a rate excess back under the threshold,
// from the largest roll/pitch acceleration any state/action can produce.
double min_correction_time_bound(double rate_excess, int axis,
                                 const PhysicalParams& p,
                                 const ActuationLimits& limits);

// Exhaustive search over PID gains on the tracking scenario. Each candidate
// is scored by its mean TT error over the seeds; ties keep the earlier
// candidate.
struct PidGrid {
  std::vector<double> pitch_kp{30, 100, 300, 1000, 3000};
  std::vector<double> pitch_kd{100, 300, 1000, 3000, 10000};
  std::vector<double> roll_kp{0.01, 0.03, 0.1, 0.3, 1, 3};
  std::vector<double> roll_kd{0.03, 0.1, 0.3, 1, 3, 10};
};

struct PidTuneResult {
  PidGains best;
  double best_error = 0.0;
  int evaluated = 0;
};

PidTuneResult tune_pid(const ScenarioSpec& tt_spec, const PidGrid& grid,
                       std::span<const std::uint64_t> seeds);

// Named row -> per-controller aggregate.
struct ComparisonTable {
  std::vector<std::string> controllers;
  std::vector<Metrics> metrics;  // one per (scenario, controller)
};

ComparisonTable compare(std::span<const ScenarioSpec> specs,
                        std::span<Controller* const> controllers,
                        std::span<const std::uint64_t> seeds);

}  // namespace airborne

#endif  // AIRBORNE_SCENARIO_H_
