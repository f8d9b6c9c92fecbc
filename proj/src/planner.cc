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

#include "airborne/planner.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "airborne/errors.h"
#include "airborne/parallel.h"

namespace airborne {

void PlannerConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("planner: dt must be > 0");
  if (sample_count < 1) throw ConfigError("planner: sample_count must be >= 1");
  if (!(sigma_rpm_rate > 0.0) || !(sigma_steer_rate > 0.0)) {
    throw ConfigError("planner: sampling sigmas must be > 0");
  }
  if (!(replan_hz > 0.0)) throw ConfigError("planner: replan_hz must be > 0");
  for (double t : feasibility_tolerance) {
    if (!(t >= 0.0)) throw ConfigError("planner: feasibility tolerances must be >= 0");
  }
  if (workers < 0) throw ConfigError("planner: workers must be >= 0");
  limits.validate();
}

double CostSchedule::weight(int dim, double u) const {
  double w = 0.0;
  for (const WeightSegment& seg : weights[dim]) {
    if (seg.u_start <= u) w = seg.weight;
    else break;
  }
  return w;
}

void CostSchedule::validate() const {
  std::vector<double> breaks{0.0};
  for (int i = 0; i < kStateDim; ++i) {
    const std::string name(kStateNames[i]);
    if (weights[i].empty() || weights[i].front().u_start != 0.0) {
      throw ConfigError("cost schedule: weights for '" + name +
                        "' must start at u = 0");
    }
    for (std::size_t k = 0; k < weights[i].size(); ++k) {
      const WeightSegment& seg = weights[i][k];
      if (!(seg.weight >= 0.0) || !std::isfinite(seg.weight)) {
        throw ConfigError("cost schedule: negative weight for '" + name + "'");
      }
      if (k > 0 && !(seg.u_start > weights[i][k - 1].u_start)) {
        throw ConfigError("cost schedule: breakpoints for '" + name +
                          "' must increase");
      }
      breaks.push_back(seg.u_start);
    }
    if (!(scales[i] >= 0.0) || !std::isfinite(scales[i])) {
      throw ConfigError("cost schedule: scale for '" + name + "' must be >= 0");
    }
  }
  // Weights are piecewise constant, so checking every breakpoint covers u.
  for (double u : breaks) {
    bool any = false;
    for (int i = 0; i < kStateDim; ++i) any = any || weight(i, u) > 0.0;
    if (!any) throw ConfigError("cost schedule: all weights vanish at some u");
  }
}

CostSchedule CostSchedule::defaults(const ActuationLimits& limits) {
  CostSchedule s;
  const std::vector<WeightSegment> angle{{0.0, 1.0}, {0.5, 0.3}};
  const std::vector<WeightSegment> rate{{0.0, 0.1}, {0.5, 1.0}};
  const std::vector<WeightSegment> late{{0.0, 0.0}, {0.75, 1.0}};
  s.weights = {angle, rate, angle, rate, angle, rate, late, late};
  const double steer_span = std::max(std::abs(limits.steer_min), std::abs(limits.steer_max));
  s.scales = {1.0 / kPi,    1.0 / kTwoPi, 1.0 / kPi,
              1.0 / kTwoPi, 1.0 / kPi,    1.0 / kTwoPi,
              limits.rpm_max > 0.0 ? 1.0 / limits.rpm_max : 1.0,
              steer_span > 0.0 ? 1.0 / steer_span : 1.0};
  return s;
}

CostSchedule CostSchedule::flight(const ActuationLimits& limits) {
  CostSchedule s = defaults(limits);
  const std::vector<WeightSegment> angle{{0.0, 1.0}};
  const std::vector<WeightSegment> rate{{0.0, 0.1}, {0.5, 0.2}};
  const std::vector<WeightSegment> late{{0.0, 0.0}, {0.75, 0.02}};
  s.weights = {angle, rate, angle, rate, angle, rate, late, late};
  return s;
}

CostSchedule CostSchedule::scaled(double factor) const {
  CostSchedule s = *this;
  for (auto& segs : s.weights) {
    for (WeightSegment& seg : segs) seg.weight *= factor;
  }
  return s;
}

int horizon(double t_remaining, double dt) {
  if (!(dt > 0.0)) throw ConfigError("horizon: dt must be > 0");
  if (!(t_remaining >= 0.0)) return 1;
  // The epsilon absorbs representation error so that 1.9 / 0.2 rounds to 10.
  const double steps = std::floor(t_remaining / dt + 0.5 + 1e-9);
  return std::max(1, static_cast<int>(steps));
}

std::vector<Action> sample_actions(const Action& last_best,
                                   const PlannerConfig& cfg, Rng& rng) {
  const ActuationLimits& lim = cfg.limits;
  std::uniform_real_distribution<double> rpm(last_best.rpm_rate - cfg.sigma_rpm_rate,
                                             last_best.rpm_rate + cfg.sigma_rpm_rate);
  std::uniform_real_distribution<double> steer(last_best.steer_rate - cfg.sigma_steer_rate,
                                               last_best.steer_rate + cfg.sigma_steer_rate);
  std::vector<Action> out(cfg.sample_count);
  for (Action& a : out) {
    a.rpm_rate = std::clamp(rpm(rng), lim.rpm_rate_min, lim.rpm_rate_max);
    a.steer_rate = std::clamp(steer(rng), lim.steer_rate_min, lim.steer_rate_max);
  }
  return out;
}

Trajectory rollout(const Action& sample, const VehicleState& s0, int horizon,
                   const ForwardModel& model) {
  if (horizon < 1) throw ArgumentError("rollout: horizon must be >= 1");
  const ActuationLimits& lim = model.limits();
  Trajectory traj;
  traj.states.reserve(horizon + 1);
  traj.actions.reserve(horizon);
  VehicleState s = clamp_state(s0, lim);
  traj.states.push_back(s);
  for (int t = 0; t < horizon; ++t) {
    s = clamp_state(s, lim);
    const Action a = clamp_action(sample, s, lim, model.dt());
    traj.actions.push_back(a);
    s = model.step(s, a);
    traj.states.push_back(s);
  }
  return traj;
}

namespace {

// Per-step weights, (steps + 1) x kStateDim.
std::vector<double> weight_table(const CostSchedule& sched, int steps) {
  std::vector<double> w(static_cast<std::size_t>(steps + 1) * kStateDim);
  for (int k = 0; k <= steps; ++k) {
    const double u = static_cast<double>(k) / steps;
    for (int i = 0; i < kStateDim; ++i) w[k * kStateDim + i] = sched.weight(i, u);
  }
  return w;
}

double states_cost(const VehicleState* states, int count, const GoalState& g,
                   const double* weights, const StateVector& scales) {
  double cost = 0.0;
  for (int k = 0; k < count; ++k) {
    const StateVector r = goal_residual(states[k], g);
    const double* w = weights + static_cast<std::size_t>(k) * kStateDim;
    for (int i = 0; i < kStateDim; ++i) {
      if (w[i] == 0.0) continue;
      const double e = scales[i] * r[i];
      cost += w[i] * e * e;
    }
  }
  return cost;
}

}  // namespace

double calculate_cost(const Trajectory& traj, const GoalState& g,
                      const CostSchedule& sched) {
  if (traj.states.size() < 2) {
    throw ArgumentError("calculate_cost: trajectory needs at least 2 states");
  }
  const int steps = static_cast<int>(traj.states.size()) - 1;
  const std::vector<double> w = weight_table(sched, steps);
  return states_cost(traj.states.data(), steps + 1, g, w.data(), sched.scales);
}

GoalState alternate_goal(const GoalState& g, const VehicleState& terminal) {
  GoalState alt = g;
  alt.roll_rate = terminal.roll_rate;
  alt.pitch_rate = terminal.pitch_rate;
  alt.yaw_rate = terminal.yaw_rate;
  alt.rpm = std::max(g.rpm, terminal.rpm);
  return alt;
}

bool within_tolerance(const VehicleState& s, const GoalState& g,
                      const StateVector& tolerance) {
  const StateVector r = goal_residual(s, g);
  for (int i = 0; i < kStateDim; ++i) {
    if (!(std::abs(r[i]) <= tolerance[i])) return false;
  }
  return true;
}

namespace {

constexpr std::size_t kRolloutBlock = 64;

std::size_t argmin(const std::vector<double>& costs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < costs.size(); ++i) {
    if (costs[i] < costs[best]) best = i;
  }
  return best;
}

}  // namespace

PlanResult evaluate_candidates(const VehicleState& s0, const GoalState& g,
                               double t_remaining,
                               std::span<const Action> candidates,
                               const ForwardModel& model,
                               const PlannerConfig& cfg,
                               const CostSchedule& sched) {
  if (!(t_remaining > 0.0)) {
    throw PlanningWindowExpired("plan_cycle: no time remaining before landing");
  }
  if (candidates.empty()) throw ArgumentError("plan_cycle: no candidate actions");
  if (std::abs(cfg.dt - model.dt()) > 1e-12) {
    throw ConfigError("planner dt (" + std::to_string(cfg.dt) +
                      ") differs from the forward model dt (" +
                      std::to_string(model.dt()) + ")");
  }
  const int h = horizon(t_remaining, cfg.dt);
  const ActuationLimits& lim = model.limits();
  const std::size_t n = candidates.size();
  const std::size_t stride = static_cast<std::size_t>(h) + 1;

  // states[i * stride + k]: state k of candidate i. Candidates advance in
  // fixed blocks through step_batch, so the arithmetic does not depend on
  // the worker count.
  std::vector<VehicleState> states(n * stride);
  std::vector<Action> applied(n * h);
  const VehicleState start = clamp_state(s0, lim);
  const std::size_t blocks = (n + kRolloutBlock - 1) / kRolloutBlock;
  parallel_for(blocks, resolve_workers(cfg.workers), [&](std::size_t b) {
    const std::size_t lo = b * kRolloutBlock;
    const std::size_t cnt = std::min(n, lo + kRolloutBlock) - lo;
    thread_local std::vector<VehicleState> cur, next;
    thread_local std::vector<Action> act;
    cur.assign(cnt, start);
    next.resize(cnt);
    act.resize(cnt);
    for (std::size_t i = 0; i < cnt; ++i) states[(lo + i) * stride] = start;
    for (int t = 0; t < h; ++t) {
      for (std::size_t i = 0; i < cnt; ++i) {
        cur[i] = clamp_state(cur[i], lim);
        act[i] = clamp_action(candidates[lo + i], cur[i], lim, model.dt());
        applied[(lo + i) * h + t] = act[i];
      }
      model.step_batch(cur, act, next);
      for (std::size_t i = 0; i < cnt; ++i) {
        states[(lo + i) * stride + t + 1] = next[i];
      }
      cur.swap(next);
    }
  });

  const std::vector<double> weights = weight_table(sched, h);
  std::vector<double> costs(n);
  auto score = [&](const GoalState& goal) {
    for (std::size_t i = 0; i < n; ++i) {
      costs[i] = states_cost(&states[i * stride], h + 1, goal, weights.data(),
                             sched.scales);
    }
  };
  score(g);

  PlanResult result;
  result.horizon = h;
  result.effective_goal = g;
  std::size_t best = argmin(costs);
  const VehicleState& terminal = states[best * stride + h];
  result.feasible = within_tolerance(terminal, g, cfg.feasibility_tolerance);
  if (!result.feasible) {
    result.effective_goal = alternate_goal(g, terminal);
    score(result.effective_goal);
    best = argmin(costs);
  }
  result.best_index = best;
  result.best_action = candidates[best];
  result.best_cost = costs[best];
  result.best_trajectory.states.assign(states.begin() + best * stride,
                                       states.begin() + (best + 1) * stride);
  result.best_trajectory.actions.assign(applied.begin() + best * h,
                                        applied.begin() + (best + 1) * h);
  return result;
}

PlanResult plan_cycle(const VehicleState& s0, const GoalState& g,
                      double t_remaining, const Action& last_best,
                      const ForwardModel& model, const PlannerConfig& cfg,
                      const CostSchedule& sched, Rng& rng) {
  if (!(t_remaining > 0.0)) {
    throw PlanningWindowExpired("plan_cycle: no time remaining before landing");
  }
  const std::vector<Action> samples = sample_actions(last_best, cfg, rng);
  return evaluate_candidates(s0, g, t_remaining, samples, model, cfg, sched);
}

int cycle_count(double t_total, double replan_hz) {
  return std::max(1, static_cast<int>(std::floor(t_total * replan_hz + 0.5 + 1e-9)));
}

ControlLoopResult control_loop(const VehicleState& s0, const GoalState& g,
                               double t_total, const ForwardModel& model,
                               const PlannerConfig& cfg,
                               const CostSchedule& sched,
                               const EnvironmentStep& env, Rng& rng) {
  if (!(t_total > 0.0)) {
    throw PlanningWindowExpired("control_loop: total airtime must be > 0");
  }
  cfg.validate();
  const int cycles = cycle_count(t_total, cfg.replan_hz);
  const double period = 1.0 / cfg.replan_hz;

  ControlLoopResult out;
  VehicleState s = clamp_state(s0, cfg.limits);
  out.executed.states.push_back(s);
  Action last_best{0.0, 0.0};
  for (int c = 0; c < cycles; ++c) {
    const double t_remaining = static_cast<double>(cycles - c) * period;
    const PlanResult plan =
        plan_cycle(s, g, t_remaining, last_best, model, cfg, sched, rng);
    out.executed.actions.push_back(
        clamp_action(plan.best_action, clamp_state(s, cfg.limits), cfg.limits, period));
    s = env(s, plan.best_action, period);
    out.executed.states.push_back(s);
    out.cycles.push_back({c, t_remaining, plan.horizon, plan.best_action,
                          plan.best_cost, plan.feasible});
    last_best = plan.best_action;
  }
  return out;
}

}  // namespace airborne
