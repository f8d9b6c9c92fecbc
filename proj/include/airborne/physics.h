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

#ifndef AIRBORNE_PHYSICS_H_
#define AIRBORNE_PHYSICS_H_

#include <cstdint>
#include <optional>
#include <span>

#include "airborne/dynamics.h"
#include "airborne/types.h"

namespace airborne {

// Moments of inertia (kg m^2) of the bicycle-model vehicle and the noise
// level of the otherwise uncontrolled yaw axis.
struct PhysicalParams {
  double i_fw = 0.05;
  double i_rw = 0.05;
  double i_chassis_roll = 0.8;
  double i_chassis_pitch = 2.0;
  double yaw_noise_std = 0.05;  // rad/s^2
  double gravity = 9.81;        // m/s^2

  void validate() const;
};

// Reaction of the chassis to accelerating the wheels. yaw_acc is zero.
AngularAccel inertial_accel(const VehicleState& s, const Action& a,
                            const PhysicalParams& p);

// Precession torque of the spinning front wheel being steered. yaw_acc is
// zero.
AngularAccel gyroscopic_accel(const VehicleState& s, const Action& a,
                              const PhysicalParams& p);

// Sum of both effects. With rng, yaw_acc is drawn from N(0, yaw_noise_std);
// otherwise it is zero.
AngularAccel total_accel(const VehicleState& s, const Action& a,
                         const PhysicalParams& p, Rng* rng = nullptr);

// One oracle step: clamp state and action, evaluate total_accel at the
// clamped pair, integrate with advance().
VehicleState step(const VehicleState& s, const Action& a, double dt,
                  const PhysicalParams& p, const ActuationLimits& limits,
                  Rng* rng = nullptr);

// Rolls out the action sequence from clamp_state(s0). The trajectory's
// actions are the applied (post-clamp) ones. With a seed, yaw noise is drawn
// from Rng(seed); without, yaw noise is off.
// Throws ArgumentError on an empty action sequence.
Trajectory simulate(const VehicleState& s0, std::span<const Action> actions,
                    double dt, const PhysicalParams& p,
                    const ActuationLimits& limits,
                    std::optional<std::uint64_t> seed = std::nullopt);

// Time of flight until the landing surface height_delta below the launch
// point (negative when landing higher). Positive root of
// 0.5 g t^2 - v sin(theta) t - height_delta = 0.
// Throws InfeasibleTrajectory when there is no non-negative real root.
double projectile_airtime(double speed, double launch_angle,
                          double height_delta, double gravity);

// The analytic model behind the ForwardModel interface, yaw noise off.
class OracleForwardModel : public ForwardModel {
 public:
  OracleForwardModel(const PhysicalParams& params,
                     const ActuationLimits& limits, double dt);

  VehicleState step(const VehicleState& s, const Action& a) const override;
  double dt() const override { return dt_; }
  const ActuationLimits& limits() const override { return limits_; }
  const PhysicalParams& params() const { return params_; }

 private:
  PhysicalParams params_;
  ActuationLimits limits_;
  double dt_;
};

}  // namespace airborne

#endif  // AIRBORNE_PHYSICS_H_
