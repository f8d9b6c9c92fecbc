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

#ifndef AIRBORNE_DYNAMICS_H_
#define AIRBORNE_DYNAMICS_H_

#include <cstddef>
#include <random>
#include <span>

#include "airborne/types.h"

namespace airborne {

using Rng = std::mt19937_64;

// Clamps (s, a), integrates one step of length dt under constant angular
// acceleration, and clamps/wraps the result. The analytic oracle and the
// hybrid model both step through this routine.
//
//   x'   = x + x_dot * dt + 0.5 * acc * dt^2   (roll, pitch, yaw)
//   x_dot' = x_dot + acc * dt
//   rpm' = rpm + rpm_rate * dt, steer' = steer + steer_rate * dt
//
// acc is applied as given; callers evaluate it at the clamped (s, a).
// Throws ConfigError if dt <= 0.
VehicleState advance(const AngularAccel& acc, const VehicleState& s,
                     const Action& a, double dt, const ActuationLimits& limits);

// A discrete forward kinodynamic model s_{t+1} = f(s_t, a_t).
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual VehicleState step(const VehicleState& s, const Action& a) const = 0;

  // out[i] = step(s[i], a[i]) for equally sized spans. Models may override
  // with a batched evaluation that agrees with step() to rounding.
  virtual void step_batch(std::span<const VehicleState> s,
                          std::span<const Action> a,
                          std::span<VehicleState> out) const {
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = step(s[i], a[i]);
  }

  // Integration interval of one step (seconds).
  virtual double dt() const = 0;
  virtual const ActuationLimits& limits() const = 0;
};

}  // namespace airborne

#endif  // AIRBORNE_DYNAMICS_H_
