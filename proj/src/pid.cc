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

#include "airborne/pid.h"

#include <algorithm>
#include <cmath>

#include "airborne/errors.h"

namespace airborne {

void PidGains::validate() const {
  for (const PidLoopGains* l : {&pitch, &roll}) {
    if (!std::isfinite(l->kp) || !std::isfinite(l->ki) || !std::isfinite(l->kd)) {
      throw ConfigError("pid: gains must be finite");
    }
    if (!(l->integral_limit > 0.0)) {
      throw ConfigError("pid: integral_limit must be > 0");
    }
  }
}

PidGains PidGains::defaults() {
  // Best trajectory-tracking error on the analytic oracle from the scripted
  // grid search (airborne tune-pid).
  PidGains g;
  g.pitch = {300.0, 0.0, 1000.0, 1.0};
  g.roll = {0.1, 0.0, 0.3, 1.0};
  return g;
}

namespace {

double loop_step(const PidLoopGains& gains, double error, double dt,
                 PidLoopState& st) {
  st.integral = std::clamp(st.integral + error * dt, -gains.integral_limit,
                           gains.integral_limit);
  const double derivative =
      st.has_previous ? (error - st.previous_error) / dt : 0.0;
  st.previous_error = error;
  st.has_previous = true;
  return gains.kp * error + gains.ki * st.integral + gains.kd * derivative;
}

}  // namespace

PidOutput pid_step(const PidGains& gains, const VehicleState& s,
                   const GoalState& g, double dt_control,
                   const PidState& state, const ActuationLimits& limits) {
  if (!(dt_control > 0.0)) throw ConfigError("pid_step: dt_control must be > 0");
  PidOutput out;
  out.state = state;
  const double pitch_error = wrap_angle(s.pitch - g.pitch);
  const double roll_error = wrap_angle(g.roll - s.roll);
  out.raw.rpm_rate = loop_step(gains.pitch, pitch_error, dt_control, out.state.pitch);
  out.raw.steer_rate = loop_step(gains.roll, roll_error, dt_control, out.state.roll);
  out.applied = clamp_action(out.raw, clamp_state(s, limits), limits, dt_control);
  return out;
}

}  // namespace airborne
