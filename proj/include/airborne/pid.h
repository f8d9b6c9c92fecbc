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

#ifndef AIRBORNE_PID_H_
#define AIRBORNE_PID_H_

#include "airborne/types.h"

namespace airborne {

struct PidLoopGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 1.0;
};

// Two decoupled loops: pitch error drives rpm_rate (inertial effect), roll
// error drives steer_rate (gyroscopic effect near zero steer).
struct PidGains {
  PidLoopGains pitch;  // -> rpm_rate
  PidLoopGains roll;   // -> steer_rate

  void validate() const;
  static PidGains defaults();
};

struct PidLoopState {
  double integral = 0.0;
  double previous_error = 0.0;
  bool has_previous = false;
};

struct PidState {
  PidLoopState pitch;
  PidLoopState roll;
};

struct PidOutput {
  Action raw;      // before clamp_action
  Action applied;  // after clamp_action
  PidState state;
};

// Loop errors carry the actuator sign so that positive gains stabilize:
// pitch error = wrap(pitch - goal), since positive rpm_rate pitches the nose
// down; roll error = wrap(goal - roll), since positive steer_rate at positive
// rpm rolls positive. The derivative is a backward difference of the error
// (zero on the first call); the integral is clamped to +-integral_limit.
PidOutput pid_step(const PidGains& gains, const VehicleState& s,
                   const GoalState& g, double dt_control,
                   const PidState& state, const ActuationLimits& limits);

}  // namespace airborne

#endif  // AIRBORNE_PID_H_
