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

#ifndef AIRBORNE_PLANNER_H_
#define AIRBORNE_PLANNER_H_

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "airborne/dynamics.h"
#include "airborne/types.h"

namespace airborne {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct PlannerConfig {
  double dt = 0.2;                 // rollout integration interval, s
  int sample_count = 4000;         // N
  double sigma_rpm_rate = 2000.0;  // half-width of the rpm_rate sampling box
  double sigma_steer_rate = 0.2;   // half-width of the steer_rate box
  ActuationLimits limits;
  double replan_hz = 50.0;
  // Terminal |residual| allowed per state dimension for a plan to count as
  // feasible. Yaw is uncontrolled, rpm and steer are not checked by default.
  StateVector feasibility_tolerance{0.1, 0.3, 0.1, 0.3, kUnbounded,
                                    kUnbounded, kUnbounded, kUnbounded};
  std::uint64_t seed = 0;
  int workers = 1;  // 0 = machine parallelism

  void validate() const;
};

// Piece of a weight function: weight applies from u_start (inclusive) until
// the next segment's u_start.
struct WeightSegment {
  double u_start = 0.0;
  double weight = 0.0;
};

// Time-varying per-dimension weights w_i(u), u = t / T in [0, 1], and the
// residual scale applied before squaring.
struct CostSchedule {
  std::array<std::vector<WeightSegment>, kStateDim> weights;
  StateVector scales{};

  double weight(int dim, double u) const;

  // Throws ConfigError on negative weights, unsorted or empty segment lists,
  // or a u at which every weight is zero.
  void validate() const;

  // Angles weighted over rates in the first half of the horizon and the
  // reverse in the second half; rpm and steer only in the last quarter.
  static CostSchedule defaults(const ActuationLimits& limits);
  // Schedule used for closed-loop flight. Holding a sampled action over the
  // whole window cannot both rotate and brake, so a strong terminal rate
  // penalty makes plans timid; angles keep full weight, rates rise only to
  // 0.2, and rpm/steer enter weakly in the last quarter. Same scales.
  static CostSchedule flight(const ActuationLimits& limits);
  CostSchedule scaled(double factor) const;
};

struct PlanResult {
  Trajectory best_trajectory;
  Action best_action;  // the sampled pair, before per-step clamping
  double best_cost = 0.0;
  bool feasible = false;
  GoalState effective_goal;
  int horizon = 0;
  std::size_t best_index = 0;
};

// H = max(1, round(T / dt)), rounding halves up.
int horizon(double t_remaining, double dt);

// N pairs uniform in [last_best +- sigma], clipped to the rate limits.
std::vector<Action> sample_actions(const Action& last_best,
                                   const PlannerConfig& cfg, Rng& rng);

// Holds sample for H steps, clamping state and action before every step.
// Returns H + 1 states and the H applied actions.
Trajectory rollout(const Action& sample, const VehicleState& s0, int horizon,
                   const ForwardModel& model);

// sum_t sum_i w_i(t / T) * (scale_i * residual_i(s_t, g))^2 over all H + 1
// states.
double calculate_cost(const Trajectory& traj, const GoalState& g,
                      const CostSchedule& sched);

// Degraded goal used when the best plan cannot reach g: keeps g's attitude,
// accepts the plan's terminal rates, and asks for at least g's wheel speed.
GoalState alternate_goal(const GoalState& g, const VehicleState& terminal);

bool within_tolerance(const VehicleState& s, const GoalState& g,
                      const StateVector& tolerance);

// Scores the given candidate actions (the inner loop of plan_cycle). Ties go
// to the lowest index.
PlanResult evaluate_candidates(const VehicleState& s0, const GoalState& g,
                               double t_remaining,
                               std::span<const Action> candidates,
                               const ForwardModel& model,
                               const PlannerConfig& cfg,
                               const CostSchedule& sched);

// One planning cycle: sample around last_best, roll out, pick the cheapest,
// check feasibility. Throws PlanningWindowExpired if t_remaining <= 0.
PlanResult plan_cycle(const VehicleState& s0, const GoalState& g,
                      double t_remaining, const Action& last_best,
                      const ForwardModel& model, const PlannerConfig& cfg,
                      const CostSchedule& sched, Rng& rng);

struct CycleRecord {
  int cycle = 0;
  double t_remaining = 0.0;
  int horizon = 0;
  Action best_action;
  double best_cost = 0.0;
  bool feasible = false;
};

struct ControlLoopResult {
  Trajectory executed;  // closed-loop states and applied actions
  std::vector<CycleRecord> cycles;
};

// Advances the real system by one control period under an action.
using EnvironmentStep =
    std::function<VehicleState(const VehicleState&, const Action&, double)>;

// round(T_total * replan_hz), at least 1.
int cycle_count(double t_total, double replan_hz);

// Replans every control period with the shrinking time to landing, applies
// the first action through env, warm-starts from the previous best action.
ControlLoopResult control_loop(const VehicleState& s0, const GoalState& g,
                               double t_total, const ForwardModel& model,
                               const PlannerConfig& cfg,
                               const CostSchedule& sched,
                               const EnvironmentStep& env, Rng& rng);

}  // namespace airborne

#endif  // AIRBORNE_PLANNER_H_
