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

#include "airborne/scenario.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "airborne/errors.h"

namespace airborne {
namespace {

constexpr std::uint64_t kEnvSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kCertifySalt = 0xc2b2ae3d27d4eb4fULL;

double angle_residual(const VehicleState& s, const VehicleState& g) {
  return std::max(std::abs(wrap_angle(s.roll - g.roll)),
                  std::abs(wrap_angle(s.pitch - g.pitch)));
}

double mean_angle_residual(const VehicleState& s, const VehicleState& g) {
  return 0.5 * (std::abs(wrap_angle(s.roll - g.roll)) +
                std::abs(wrap_angle(s.pitch - g.pitch)));
}

double rate_residual(const VehicleState& s, const VehicleState& g) {
  return std::max(std::abs(s.roll_rate - g.roll_rate),
                  std::abs(s.pitch_rate - g.pitch_rate));
}

bool in_goal(const VehicleState& s, const VehicleState& g,
             const Thresholds& th) {
  return angle_residual(s, g) < th.angle && rate_residual(s, g) < th.rate;
}

GoalState indoor_goal(double roll, double pitch, const ScenarioSpec& spec) {
  GoalState g;
  g.roll = roll;
  g.pitch = pitch;
  g.rpm = spec.goal_rpm;
  return g;
}

VehicleState indoor_start(const ScenarioSpec& spec, Rng& rng) {
  VehicleState s;
  std::uniform_real_distribution<double> rpm(spec.init_rpm_min,
                                             spec.init_rpm_max);
  s.rpm = rpm(rng);
  return s;
}

int ticks(double seconds, double hz) {
  return static_cast<int>(std::floor(seconds * hz + 0.5 + 1e-9));
}

// Steps the oracle environment under a controller and keeps the log.
class Driver {
 public:
  Driver(Controller& c, const ScenarioSpec& spec, const VehicleState& s0,
         std::uint64_t seed)
      : c_(c), spec_(spec), env_rng_(seed ^ kEnvSalt),
        period_(spec.control_period()) {
    s_ = clamp_state(s0, spec.limits);
    log_.times.push_back(0.0);
    log_.states.push_back(s_);
  }

  void tick(const Target& target) {
    const Action raw = c_.act(s_, target);
    const Action applied = clamp_action(raw, s_, spec_.limits, period_);
    s_ = step(s_, applied, period_, spec_.env_params, spec_.limits,
              &env_rng_);
    ++k_;
    log_.actions.push_back(applied);
    log_.goals.push_back(target.goal);
    log_.states.push_back(s_);
    log_.times.push_back(k_ * period_);
  }

  // Instantaneous change of a body rate, recorded on the current state.
  void kick(int axis, double impulse) {
    if (axis == 0) {
      s_.roll_rate += impulse;
    } else {
      s_.pitch_rate += impulse;
    }
    log_.states.back() = s_;
  }

  const VehicleState& state() const { return s_; }
  int tick_index() const { return k_; }
  double now() const { return k_ * period_; }
  EpisodeLog& log() { return log_; }

 private:
  Controller& c_;
  const ScenarioSpec& spec_;
  Rng env_rng_;
  double period_;
  VehicleState s_;
  int k_ = 0;
  EpisodeLog log_;
};

bool at_actuator_limit(const VehicleState& s, const ActuationLimits& lim) {
  constexpr double kEps = 1e-6;
  return s.rpm <= lim.rpm_min + kEps || s.rpm >= lim.rpm_max - kEps ||
         s.steer <= lim.steer_min + kEps || s.steer >= lim.steer_max - kEps;
}

GoalState tt_curve(double t, const ScenarioSpec& spec) {
  const double w = kTwoPi / spec.tt_period;
  const double a = spec.tt_amplitude;
  GoalState g = indoor_goal(a * std::sin(w * t), a * std::sin(2.0 * w * t),
                            spec);
  g.roll_rate = a * w * std::cos(w * t);
  g.pitch_rate = 2.0 * a * w * std::cos(2.0 * w * t);
  return g;
}

// Largest |roll_acc| (axis 0) or |pitch_acc| (axis 1) reachable anywhere
// inside the actuation limits.
double max_accel(int axis, const PhysicalParams& p,
                 const ActuationLimits& lim) {
  const double rate = std::max(std::abs(lim.rpm_rate_min),
                               std::abs(lim.rpm_rate_max));
  const double steer_rate = std::max(std::abs(lim.steer_rate_min),
                                     std::abs(lim.steer_rate_max));
  const double steer = std::max(std::abs(lim.steer_min),
                                std::abs(lim.steer_max));
  const double sin_max = steer >= kPi / 2.0 ? 1.0 : std::sin(steer);
  const double rpm = std::max(std::abs(lim.rpm_min), std::abs(lim.rpm_max));
  if (axis == 0) {
    const double k = p.i_fw * kTwoPi / (p.i_chassis_roll * 60.0);
    return k * sin_max * rate + k * rpm * steer_rate;
  }
  const double k = kPi / (p.i_chassis_pitch * 60.0);
  return k * (p.i_fw + p.i_rw) * rate + k * p.i_fw * sin_max * rpm * steer_rate;
}

}  // namespace

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTT: return "tt";
    case ScenarioKind::kRSC: return "rsc";
    case ScenarioKind::kTGR: return "tgr";
    case ScenarioKind::kSS: return "ss";
    case ScenarioKind::kRamp: return "ramp";
  }
  return "?";
}

ScenarioKind parse_scenario(const std::string& name) {
  for (ScenarioKind k : {ScenarioKind::kTT, ScenarioKind::kRSC,
                         ScenarioKind::kTGR, ScenarioKind::kSS,
                         ScenarioKind::kRamp}) {
    if (scenario_name(k) == name) return k;
  }
  throw ArgumentError("unknown scenario '" + name +
                      "' (expected tt, rsc, tgr, ss or ramp)");
}

void ScenarioSpec::validate() const {
  env_params.validate();
  limits.validate();
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("scenario: ") + what + " must be > 0");
    }
  };
  positive(control_hz, "control_hz");
  positive(thresholds.angle, "angle threshold");
  positive(thresholds.rate, "rate threshold");
  positive(thresholds.stuck_dwell, "stuck dwell");
  positive(plan_window, "plan_window");
  positive(tt_period, "tt_period");
  positive(tt_max_error, "tt_max_error");
  positive(rsc_hold, "rsc_hold");
  positive(rsc_reach_limit, "rsc_reach_limit");
  positive(tgr_time_min, "tgr_time_min");
  positive(ss_hold, "ss_hold");
  positive(ramp_speed, "ramp_speed");
  positive(ramp_landing_tolerance, "ramp_landing_tolerance");
  if (tt_lookahead < 0.0 || tt_settle_time < 0.0 || tgr_post_window < 0.0 ||
      tgr_goal_range < 0.0 || rsc_magnitude <= 0.0) {
    throw ConfigError("scenario: negative window or range");
  }
  if (init_rpm_min > init_rpm_max || init_rpm_min < limits.rpm_min ||
      init_rpm_max > limits.rpm_max) {
    throw ConfigError("scenario: initial rpm range outside the rpm limits");
  }
  if (launch_rpm_min > launch_rpm_max || launch_rpm_min < limits.rpm_min ||
      launch_rpm_max > limits.rpm_max) {
    throw ConfigError("scenario: launch rpm range outside the rpm limits");
  }
  if (tgr_time_max < tgr_time_min) {
    throw ConfigError("scenario: tgr_time_max < tgr_time_min");
  }
  if (rsc_goal_count < 1 || ramp_max_attempts < 1) {
    throw ConfigError("scenario: counts must be >= 1");
  }
  if (launch_angle_std < 0.0 || launch_rate_std < 0.0 ||
      !(ss_reaction_floor > 0.0)) {
    throw ConfigError("scenario: invalid launch spread or reaction floor");
  }
  for (const Disturbance& d : ss_disturbances) {
    if (d.axis != 0 && d.axis != 1) {
      throw ConfigError("scenario: disturbance axis must be 0 or 1");
    }
    if (d.time < 0.0 || d.time >= ss_hold || !std::isfinite(d.impulse)) {
      throw ConfigError("scenario: disturbance outside the hold window");
    }
  }
}

DomController::DomController(std::shared_ptr<const ForwardModel> model,
                             PlannerConfig cfg, CostSchedule sched)
    : model_(std::move(model)), cfg_(std::move(cfg)),
      sched_(std::move(sched)), rng_(cfg_.seed) {
  if (!model_) throw ArgumentError("DomController: null model");
  cfg_.validate();
  sched_.validate();
}

void DomController::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  last_best_ = Action{};
  last_plan_ = PlanResult{};
}

Action DomController::act(const VehicleState& s, const Target& target) {
  last_plan_ = plan_cycle(s, target.goal, target.time_to_goal, last_best_,
                          *model_, cfg_, sched_, rng_);
  last_best_ = last_plan_.best_action;
  return last_best_;
}

PidController::PidController(PidGains gains, ActuationLimits limits,
                             double dt_control)
    : gains_(gains), limits_(limits), dt_(dt_control) {
  gains_.validate();
  limits_.validate();
  if (!(dt_ > 0.0)) throw ConfigError("PidController: dt must be > 0");
}

void PidController::reset(std::uint64_t) { state_ = PidState{}; }

Action PidController::act(const VehicleState& s, const Target& target) {
  const PidOutput out = pid_step(gains_, s, target.goal, dt_, state_, limits_);
  state_ = out.state;
  return out.applied;
}

TrialResult run_tt(Controller& c, const ScenarioSpec& spec,
                   std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  VehicleState s0 = indoor_start(spec, rng);
  const GoalState start = tt_curve(0.0, spec);
  s0.roll = start.roll;
  s0.pitch = start.pitch;

  Driver d(c, spec, s0, seed);
  const double hz = spec.control_hz;
  const int track = ticks(spec.tt_period, hz);
  const int settle = ticks(spec.tt_settle_time, hz);
  const double period = spec.control_period();

  double error_sum = 0.0;
  int limit_run = 0;
  int longest_limit_run = 0;
  auto watch_limits = [&]() {
    limit_run = at_actuator_limit(d.state(), spec.limits) ? limit_run + 1 : 0;
    longest_limit_run = std::max(longest_limit_run, limit_run);
  };
  for (int k = 0; k < track; ++k) {
    d.tick({tt_curve(d.now() + spec.tt_lookahead, spec), spec.tt_lookahead});
    error_sum += mean_angle_residual(d.state(), tt_curve(d.now(), spec));
    watch_limits();
  }
  GoalState final_goal = tt_curve(spec.tt_period, spec);
  final_goal.roll_rate = 0.0;
  final_goal.pitch_rate = 0.0;
  int settled_at = in_goal(d.state(), final_goal, spec.thresholds) ? 0 : -1;
  for (int k = 0; k < settle && settled_at < 0; ++k) {
    d.tick({final_goal, spec.plan_window});
    watch_limits();
    if (in_goal(d.state(), final_goal, spec.thresholds)) settled_at = k + 1;
  }

  TrialResult r;
  r.kind = ScenarioKind::kTT;
  r.seed = seed;
  const double error = error_sum / track;
  const bool stuck = longest_limit_run * period > spec.thresholds.stuck_dwell;
  r.values["TT Error (rad)"].push_back(error);
  r.success = !stuck && settled_at >= 0 && error <= spec.tt_max_error;
  if (r.success) {
    r.values["TT Completion Time (sec)"].push_back(spec.tt_period +
                                                   settled_at * period);
  } else {
    r.censored["TT Completion Time (sec)"] += 1;
  }
  r.log = std::move(d.log());
  return r;
}

TrialResult run_rsc(Controller& c, const ScenarioSpec& spec,
                    std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const VehicleState s0 = indoor_start(spec, rng);
  std::vector<std::pair<double, double>> options;
  for (double r : {-spec.rsc_magnitude, 0.0, spec.rsc_magnitude}) {
    for (double p : {-spec.rsc_magnitude, 0.0, spec.rsc_magnitude}) {
      if (r != 0.0 || p != 0.0) options.emplace_back(r, p);
    }
  }
  std::vector<std::size_t> picks;
  std::uniform_int_distribution<std::size_t> first(0, options.size() - 1);
  std::uniform_int_distribution<std::size_t> other(0, options.size() - 2);
  for (int i = 0; i < spec.rsc_goal_count; ++i) {
    if (picks.empty()) {
      picks.push_back(first(rng));
    } else {
      std::size_t j = other(rng);
      if (j >= picks.back()) ++j;  // consecutive goals differ
      picks.push_back(j);
    }
  }

  Driver d(c, spec, s0, seed);
  const double period = spec.control_period();
  const int reach_limit = ticks(spec.rsc_reach_limit, spec.control_hz);
  const int hold = ticks(spec.rsc_hold, spec.control_hz);
  TrialResult r;
  r.kind = ScenarioKind::kRSC;
  r.seed = seed;
  r.success = true;
  for (std::size_t pick : picks) {
    const GoalState g =
        indoor_goal(options[pick].first, options[pick].second, spec);
    int reached = -1;
    for (int k = 0; k < reach_limit; ++k) {
      d.tick({g, spec.plan_window});
      if (in_goal(d.state(), g, spec.thresholds)) {
        reached = k + 1;
        break;
      }
    }
    if (reached >= 0) {
      r.values["RSC Time (sec)"].push_back(reached * period);
    } else {
      r.values["RSC Time (sec)"].push_back(reach_limit * period);
      r.censored["RSC Time (sec)"] += 1;
      r.success = false;
    }
    double diff = 0.0;
    for (int k = 0; k < hold; ++k) {
      d.tick({g, spec.plan_window});
      diff += mean_angle_residual(d.state(), g);
    }
    r.values["RSC Difference (rad)"].push_back(hold > 0 ? diff / hold : 0.0);
  }
  r.log = std::move(d.log());
  return r;
}

TrialResult run_tgr(Controller& c, const ScenarioSpec& spec,
                    std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const VehicleState s0 = indoor_start(spec, rng);
  std::uniform_real_distribution<double> when(spec.tgr_time_min,
                                              spec.tgr_time_max);
  std::uniform_real_distribution<double> angle(-spec.tgr_goal_range,
                                               spec.tgr_goal_range);
  const int k_goal = std::max(1, ticks(when(rng), spec.control_hz));
  const double roll = angle(rng);
  const double pitch = angle(rng);
  const GoalState g = indoor_goal(roll, pitch, spec);
  const double period = spec.control_period();
  const double t_goal = k_goal * period;

  TrialResult r;
  r.kind = ScenarioKind::kTGR;
  r.seed = seed;
  r.certified = check_reachability(clamp_state(s0, spec.limits), g, t_goal,
                                   spec.env_params, spec.limits, period,
                                   spec.thresholds.angle, seed ^ kCertifySalt)
                    .reachable;

  Driver d(c, spec, s0, seed);
  const int post = ticks(spec.tgr_post_window, spec.control_hz);
  for (int k = 0; k < k_goal + post; ++k) {
    const double remaining = (k_goal - k) * period;
    d.tick({g, k < k_goal ? remaining : spec.plan_window});
  }
  const auto& states = d.log().states;
  auto inside = [&](int k) {
    return angle_residual(states[k], g) < spec.thresholds.angle;
  };
  double time_diff = 0.0;
  if (inside(k_goal)) {
    int j = k_goal;
    while (j > 0 && inside(j - 1)) --j;
    // Inside from the first tick: nothing to arrive at, so no deviation.
    time_diff = j == 0 ? 0.0 : (k_goal - j) * period;
  } else {
    int j = k_goal + 1;
    while (j <= k_goal + post && !inside(j)) ++j;
    if (j <= k_goal + post) {
      time_diff = (j - k_goal) * period;
    } else {
      time_diff = post * period;
      r.censored["TGR Time Difference (sec)"] += 1;
    }
  }
  const double terminal = angle_residual(states[k_goal], g);
  r.values["TGR Time Difference (sec)"].push_back(time_diff);
  r.values["TGR State Difference (rad)"].push_back(terminal);
  r.success = terminal < spec.thresholds.angle;
  r.log = std::move(d.log());
  return r;
}

TrialResult run_ss(Controller& c, const ScenarioSpec& spec,
                   std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  VehicleState s0 = indoor_start(spec, rng);
  const GoalState g = indoor_goal(spec.ss_goal_roll, spec.ss_goal_pitch, spec);
  s0.roll = g.roll;
  s0.pitch = g.pitch;

  std::vector<Disturbance> kicks = spec.ss_disturbances;
  std::stable_sort(kicks.begin(), kicks.end(),
                   [](const Disturbance& a, const Disturbance& b) {
                     return a.time < b.time;
                   });
  const int total = ticks(spec.ss_hold, spec.control_hz);
  std::vector<int> kick_ticks;
  for (const Disturbance& k : kicks) {
    kick_ticks.push_back(std::min(total - 1, ticks(k.time, spec.control_hz)));
  }

  Driver d(c, spec, s0, seed);
  std::size_t next = 0;
  for (int k = 0; k < total; ++k) {
    while (next < kicks.size() && kick_ticks[next] == k) {
      d.kick(kicks[next].axis, kicks[next].impulse);
      ++next;
    }
    d.tick({g, spec.plan_window});
  }

  TrialResult r;
  r.kind = ScenarioKind::kSS;
  r.seed = seed;
  r.success = true;
  const double period = spec.control_period();
  const auto& log = d.log();
  if (kicks.empty()) {
    r.values["SS Correction Time (sec)"].push_back(0.0);
  }
  for (std::size_t i = 0; i < kicks.size(); ++i) {
    const int kd = kick_ticks[i];
    const int ke = i + 1 < kicks.size() ? kick_ticks[i + 1] : total;
    const int axis = kicks[i].axis;
    const double sign = kicks[i].impulse >= 0.0 ? 1.0 : -1.0;

    // Reaction: first tick whose applied action accelerates the disturbed
    // axis against the impulse by at least the floor.
    int react = -1;
    for (int j = kd; j < ke && react < 0; ++j) {
      const AngularAccel acc =
          total_accel(log.states[j], log.actions[j], spec.env_params);
      const double along = axis == 0 ? acc.roll_acc : acc.pitch_acc;
      if (-sign * along >= spec.ss_reaction_floor) react = j - kd;
    }
    if (react >= 0) {
      r.values["SS Reaction Latency (sec)"].push_back(react * period);
    } else {
      r.values["SS Reaction Latency (sec)"].push_back((ke - kd) * period);
      r.censored["SS Reaction Latency (sec)"] += 1;
    }

    int corrected = -1;
    for (int j = kd + 1; j <= ke && corrected < 0; ++j) {
      if (in_goal(log.states[j], g, spec.thresholds)) corrected = j - kd;
    }
    if (corrected >= 0) {
      r.values["SS Correction Time (sec)"].push_back(corrected * period);
    } else {
      r.values["SS Correction Time (sec)"].push_back((ke - kd) * period);
      r.censored["SS Correction Time (sec)"] += 1;
      r.success = false;
    }
  }
  r.log = std::move(d.log());
  return r;
}

TrialResult run_ramp(Controller& c, const ScenarioSpec& spec,
                     std::uint64_t seed) {
  spec.validate();
  const double airtime =
      projectile_airtime(spec.ramp_speed, spec.ramp_angle,
                         spec.ramp_height_delta, spec.env_params.gravity);
  const int cycles = cycle_count(airtime, spec.control_hz);
  const double period = spec.control_period();
  Rng rng(seed);
  std::normal_distribution<double> angle(0.0, 1.0);
  std::uniform_real_distribution<double> rpm(spec.launch_rpm_min,
                                             spec.launch_rpm_max);
  TrialResult r;
  r.kind = ScenarioKind::kRamp;
  r.seed = seed;
  r.certified = false;
  VehicleState s0;
  for (int attempt = 0; attempt < spec.ramp_max_attempts; ++attempt) {
    s0 = VehicleState{};
    s0.roll = spec.launch_angle_std * angle(rng);
    s0.roll_rate = spec.launch_rate_std * angle(rng);
    s0.pitch = spec.ramp_angle + spec.launch_angle_std * angle(rng);
    s0.pitch_rate = spec.launch_rate_std * angle(rng);
    s0.rpm = rpm(rng);
    s0 = clamp_state(s0, spec.limits);
    if (check_reachability(s0, spec.ramp_goal, cycles * period,
                           spec.env_params, spec.limits, period,
                           spec.thresholds.angle, seed ^ kCertifySalt)
            .reachable) {
      r.certified = true;
      break;
    }
  }

  Driver d(c, spec, s0, seed);
  for (int k = 0; k < cycles; ++k) {
    d.tick({spec.ramp_goal, (cycles - k) * period});
  }
  const VehicleState& land = d.state();
  const double roll = std::abs(wrap_angle(land.roll - spec.ramp_goal.roll));
  const double pitch = std::abs(wrap_angle(land.pitch - spec.ramp_goal.pitch));
  r.values["Ramp Landing Roll (rad)"].push_back(roll);
  r.values["Ramp Landing Pitch (rad)"].push_back(pitch);
  r.success = roll <= spec.ramp_landing_tolerance &&
              pitch <= spec.ramp_landing_tolerance;
  r.log = std::move(d.log());
  return r;
}

TrialResult run_trial(Controller& c, const ScenarioSpec& spec,
                      std::uint64_t seed) {
  c.reset(seed);
  switch (spec.kind) {
    case ScenarioKind::kTT: return run_tt(c, spec, seed);
    case ScenarioKind::kRSC: return run_rsc(c, spec, seed);
    case ScenarioKind::kTGR: return run_tgr(c, spec, seed);
    case ScenarioKind::kSS: return run_ss(c, spec, seed);
    case ScenarioKind::kRamp: return run_ramp(c, spec, seed);
  }
  throw ArgumentError("run_trial: unknown scenario");
}

double MetricStat::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

double MetricStat::stddev() const {
  if (values.empty()) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / values.size());
}

const MetricStat* Metrics::find(const std::string& name) const {
  for (const MetricStat& s : stats) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<std::string> metric_rows(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTT:
      return {"TT Error (rad)", "TT Completion Time (sec)"};
    case ScenarioKind::kRSC:
      return {"RSC Time (sec)", "RSC Difference (rad)"};
    case ScenarioKind::kTGR:
      return {"TGR Time Difference (sec)", "TGR State Difference (rad)"};
    case ScenarioKind::kSS:
      return {"SS Correction Time (sec)", "SS Reaction Latency (sec)"};
    case ScenarioKind::kRamp:
      return {"Ramp Landing Roll (rad)", "Ramp Landing Pitch (rad)"};
  }
  return {};
}

std::string success_row(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTT: return "TT Success Rate";
    case ScenarioKind::kRSC: return "RSC Success Rate";
    case ScenarioKind::kTGR: return "TGR Success Rate";
    case ScenarioKind::kSS: return "SS Success Rate";
    case ScenarioKind::kRamp: return "Ramp Success Rate";
  }
  return {};
}

Metrics run_scenario(Controller& c, const ScenarioSpec& spec,
                     std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ArgumentError("run_scenario: no seeds");
  Metrics m;
  m.kind = spec.kind;
  m.controller = c.name();
  for (const std::string& row : metric_rows(spec.kind)) {
    m.stats.push_back({row, {}, 0});
  }
  for (std::uint64_t seed : seeds) {
    TrialResult r = run_trial(c, spec, seed);
    ++m.trials;
    if (r.success) ++m.successes;
    for (MetricStat& s : m.stats) {
      auto v = r.values.find(s.name);
      if (v != r.values.end()) {
        s.values.insert(s.values.end(), v->second.begin(), v->second.end());
      }
      auto cz = r.censored.find(s.name);
      if (cz != r.censored.end()) s.censored += cz->second;
    }
    m.per_trial.push_back(std::move(r));
  }
  return m;
}

ReachabilityResult check_reachability(const VehicleState& s0,
                                      const GoalState& g, double horizon_time,
                                      const PhysicalParams& p,
                                      const ActuationLimits& limits,
                                      double control_dt, double tolerance,
                                      std::uint64_t seed) {
  if (!(control_dt > 0.0)) throw ConfigError("reachability: dt must be > 0");
  if (!(horizon_time > 0.0)) {
    throw PlanningWindowExpired("reachability: horizon must be > 0");
  }
  constexpr int kSegments = 4;
  constexpr int kDims = 2 * kSegments;
  constexpr int kShots = 2000;
  constexpr int kRefined = 4;
  constexpr int kRefineBudget = 400;
  const int n = std::max(1, ticks(horizon_time, 1.0 / control_dt));
  const VehicleState start = clamp_state(s0, limits);

  auto scale = [](double u, double lo, double hi) {
    return u >= 0.0 ? u * hi : -u * lo;
  };
  auto action_at = [&](const std::array<double, kDims>& u, int k) {
    const int seg = std::min(kSegments - 1, k * kSegments / n);
    return Action{scale(u[2 * seg], limits.rpm_rate_min, limits.rpm_rate_max),
                  scale(u[2 * seg + 1], limits.steer_rate_min,
                        limits.steer_rate_max)};
  };
  auto evaluate = [&](const std::array<double, kDims>& u) {
    VehicleState s = start;
    for (int k = 0; k < n; ++k) s = step(s, action_at(u, k), control_dt, p, limits);
    return angle_residual(s, g);
  };

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> extreme(-1, 1);
  using Point = std::pair<double, std::array<double, kDims>>;
  std::vector<Point> best;
  for (int shot = 0; shot < kShots; ++shot) {
    std::array<double, kDims> u;
    for (double& x : u) {
      x = coin(rng) < 0.3 ? static_cast<double>(extreme(rng)) : unit(rng);
    }
    const double e = evaluate(u);
    if (e <= tolerance) {
      best.assign(1, {e, u});
      break;
    }
    best.emplace_back(e, u);
    std::sort(best.begin(), best.end(),
              [](const Point& a, const Point& b) { return a.first < b.first; });
    if (best.size() > kRefined) best.pop_back();
  }

  for (Point& pt : best) {
    if (pt.first <= tolerance) break;
    double stride = 0.5;
    int evals = 0;
    while (stride > 1e-3 && evals < kRefineBudget && pt.first > tolerance) {
      bool improved = false;
      for (int i = 0; i < kDims && pt.first > tolerance; ++i) {
        for (double dir : {stride, -stride}) {
          std::array<double, kDims> u = pt.second;
          u[i] = std::clamp(u[i] + dir, -1.0, 1.0);
          const double e = evaluate(u);
          ++evals;
          if (e < pt.first) {
            pt = {e, u};
            improved = true;
            break;
          }
        }
      }
      if (!improved) stride *= 0.5;
    }
  }
  const auto winner = std::min_element(
      best.begin(), best.end(),
      [](const Point& a, const Point& b) { return a.first < b.first; });

  ReachabilityResult out;
  out.best_error = winner->first;
  out.reachable = winner->first <= tolerance;
  for (int k = 0; k < n; ++k) out.schedule.push_back(action_at(winner->second, k));
  return out;
}

double min_correction_time_bound(double rate_excess, int axis,
                                 const PhysicalParams& p,
                                 const ActuationLimits& limits) {
  if (axis != 0 && axis != 1) throw ArgumentError("axis must be 0 or 1");
  const double a = max_accel(axis, p, limits);
  return rate_excess <= 0.0 ? 0.0 : rate_excess / a;
}

PidTuneResult tune_pid(const ScenarioSpec& tt_spec, const PidGrid& grid,
                       std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ArgumentError("tune_pid: no seeds");
  ScenarioSpec spec = tt_spec;
  spec.kind = ScenarioKind::kTT;
  PidTuneResult out;
  out.best_error = std::numeric_limits<double>::infinity();
  for (double pkp : grid.pitch_kp) {
    for (double pkd : grid.pitch_kd) {
      for (double rkp : grid.roll_kp) {
        for (double rkd : grid.roll_kd) {
          PidGains g;
          g.pitch = {pkp, 0.0, pkd, 1.0};
          g.roll = {rkp, 0.0, rkd, 1.0};
          PidController c(g, spec.limits, spec.control_period());
          const Metrics m = run_scenario(c, spec, seeds);
          const double e = m.find("TT Error (rad)")->mean();
          ++out.evaluated;
          if (e < out.best_error) {
            out.best_error = e;
            out.best = g;
          }
        }
      }
    }
  }
  return out;
}

ComparisonTable compare(std::span<const ScenarioSpec> specs,
                        std::span<Controller* const> controllers,
                        std::span<const std::uint64_t> seeds) {
  ComparisonTable t;
  for (Controller* c : controllers) t.controllers.push_back(c->name());
  for (const ScenarioSpec& spec : specs) {
    for (Controller* c : controllers) {
      t.metrics.push_back(run_scenario(*c, spec, seeds));
    }
  }
  return t;
}

}  // namespace airborne
