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

#include "airborne/physics.h"

#include <cmath>

#include "airborne/errors.h"

namespace airborne {

void PhysicalParams::validate() const {
  if (!(i_fw > 0.0) || !(i_rw > 0.0) || !(i_chassis_roll > 0.0) ||
      !(i_chassis_pitch > 0.0)) {
    throw ConfigError("physical params: all inertias must be > 0");
  }
  if (!(yaw_noise_std >= 0.0)) {
    throw ConfigError("physical params: yaw_noise_std must be >= 0");
  }
  if (!(gravity > 0.0)) throw ConfigError("physical params: gravity must be > 0");
}

// rpm -> rad/s is 2*pi/60. The pitch terms carry pi/60: the front and rear
// wheel torques act half a wheelbase from the center of gravity.
AngularAccel inertial_accel(const VehicleState& s, const Action& a,
                            const PhysicalParams& p) {
  const double roll_acc = -p.i_fw * std::sin(s.steer) * kTwoPi /
                          (p.i_chassis_roll * 60.0) * a.rpm_rate;
  const double pitch_acc = -(p.i_fw * std::cos(s.steer) + p.i_rw) * kPi /
                           (p.i_chassis_pitch * 60.0) * a.rpm_rate;
  return {roll_acc, pitch_acc, 0.0};
}

AngularAccel gyroscopic_accel(const VehicleState& s, const Action& a,
                              const PhysicalParams& p) {
  const double roll_acc = std::cos(s.steer) * p.i_fw * kTwoPi /
                          (p.i_chassis_roll * 60.0) * s.rpm * a.steer_rate;
  const double pitch_acc = std::sin(s.steer) * p.i_fw * kPi /
                           (p.i_chassis_pitch * 60.0) * s.rpm * a.steer_rate;
  return {roll_acc, pitch_acc, 0.0};
}

AngularAccel total_accel(const VehicleState& s, const Action& a,
                         const PhysicalParams& p, Rng* rng) {
  const AngularAccel inertial = inertial_accel(s, a, p);
  const AngularAccel gyro = gyroscopic_accel(s, a, p);
  double yaw_acc = 0.0;
  if (rng != nullptr && p.yaw_noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, p.yaw_noise_std);
    yaw_acc = noise(*rng);
  }
  return {inertial.roll_acc + gyro.roll_acc,
          inertial.pitch_acc + gyro.pitch_acc, yaw_acc};
}

VehicleState advance(const AngularAccel& acc, const VehicleState& s,
                     const Action& a, double dt,
                     const ActuationLimits& limits) {
  if (!(dt > 0.0)) throw ConfigError("integration step dt must be > 0");
  const VehicleState cs = clamp_state(s, limits);
  const Action ca = clamp_action(a, cs, limits, dt);
  const double half_dt2 = 0.5 * dt * dt;

  VehicleState next;
  next.roll = cs.roll + cs.roll_rate * dt + acc.roll_acc * half_dt2;
  next.roll_rate = cs.roll_rate + acc.roll_acc * dt;
  next.pitch = cs.pitch + cs.pitch_rate * dt + acc.pitch_acc * half_dt2;
  next.pitch_rate = cs.pitch_rate + acc.pitch_acc * dt;
  next.yaw = cs.yaw + cs.yaw_rate * dt + acc.yaw_acc * half_dt2;
  next.yaw_rate = cs.yaw_rate + acc.yaw_acc * dt;
  next.rpm = cs.rpm + ca.rpm_rate * dt;
  next.steer = cs.steer + ca.steer_rate * dt;
  return clamp_state(next, limits);
}

VehicleState step(const VehicleState& s, const Action& a, double dt,
                  const PhysicalParams& p, const ActuationLimits& limits,
                  Rng* rng) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be > 0");
  const VehicleState cs = clamp_state(s, limits);
  const Action ca = clamp_action(a, cs, limits, dt);
  return advance(total_accel(cs, ca, p, rng), cs, ca, dt, limits);
}

Trajectory simulate(const VehicleState& s0, std::span<const Action> actions,
                    double dt, const PhysicalParams& p,
                    const ActuationLimits& limits,
                    std::optional<std::uint64_t> seed) {
  if (actions.empty()) throw ArgumentError("simulate: empty action sequence");
  if (!(dt > 0.0)) throw ConfigError("simulate: dt must be > 0");
  std::optional<Rng> rng;
  if (seed) rng.emplace(*seed);

  Trajectory traj;
  traj.states.reserve(actions.size() + 1);
  traj.actions.reserve(actions.size());
  VehicleState s = clamp_state(s0, limits);
  traj.states.push_back(s);
  for (const Action& a : actions) {
    traj.actions.push_back(clamp_action(a, s, limits, dt));
    s = step(s, a, dt, p, limits, rng ? &*rng : nullptr);
    traj.states.push_back(s);
  }
  return traj;
}

double projectile_airtime(double speed, double launch_angle,
                          double height_delta, double gravity) {
  if (!(gravity > 0.0)) throw ConfigError("projectile_airtime: gravity must be > 0");
  if (!(speed >= 0.0)) throw ArgumentError("projectile_airtime: speed must be >= 0");
  // 0.5 g t^2 - vz t - h = 0
  const double vz = speed * std::sin(launch_angle);
  const double disc = vz * vz + 2.0 * gravity * height_delta;
  if (!(disc >= 0.0)) {
    throw InfeasibleTrajectory("projectile never reaches the landing height");
  }
  const double t = (vz + std::sqrt(disc)) / gravity;
  if (!(t >= 0.0)) {
    throw InfeasibleTrajectory("projectile lands before launch");
  }
  return t;
}

OracleForwardModel::OracleForwardModel(const PhysicalParams& params,
                                       const ActuationLimits& limits,
                                       double dt)
    : params_(params), limits_(limits), dt_(dt) {
  params_.validate();
  limits_.validate();
  if (!(dt > 0.0)) throw ConfigError("oracle model: dt must be > 0");
}

VehicleState OracleForwardModel::step(const VehicleState& s,
                                      const Action& a) const {
  return airborne::step(s, a, dt_, params_, limits_, nullptr);
}

}  // namespace airborne
