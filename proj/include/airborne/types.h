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

#ifndef AIRBORNE_TYPES_H_
#define AIRBORNE_TYPES_H_

#include <array>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace airborne {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr int kStateDim = 8;
inline constexpr int kActionDim = 2;

using StateVector = std::array<double, kStateDim>;

// Index of each state component in StateVector and in every state CSV.
enum StateIndex : int {
  kRoll = 0,
  kRollRate = 1,
  kPitch = 2,
  kPitchRate = 3,
  kYaw = 4,
  kYawRate = 5,
  kRpm = 6,
  kSteer = 7,
};

// Column names in canonical order.
inline constexpr std::array<std::string_view, kStateDim> kStateNames = {
    "roll", "roll_rate", "pitch", "pitch_rate",
    "yaw",  "yaw_rate",  "rpm",   "steer"};

// In-air vehicle state: attitude (rad), attitude rates (rad/s), wheel speed
// (rpm) and front steering angle (rad).
struct VehicleState {
  double roll = 0.0;
  double roll_rate = 0.0;
  double pitch = 0.0;
  double pitch_rate = 0.0;
  double yaw = 0.0;
  double yaw_rate = 0.0;
  double rpm = 0.0;
  double steer = 0.0;

  StateVector to_array() const;
  // Throws DomainError if any entry is non-finite.
  static VehicleState from_array(std::span<const double> v);

  bool is_finite() const;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

// Target state at landing (or at the end of a maneuver window).
struct GoalState : VehicleState {
  GoalState() = default;
  explicit GoalState(const VehicleState& s) : VehicleState(s) {}
};

// Control input: wheel acceleration (rpm/s) and steering rate (rad/s).
struct Action {
  double rpm_rate = 0.0;
  double steer_rate = 0.0;

  friend bool operator==(const Action&, const Action&) = default;
};

// Angular accelerations (rad/s^2) acting on the chassis.
struct AngularAccel {
  double roll_acc = 0.0;
  double pitch_acc = 0.0;
  double yaw_acc = 0.0;

  friend bool operator==(const AngularAccel&, const AngularAccel&) = default;
};

struct ActuationLimits {
  double rpm_min = 0.0;
  double rpm_max = 1980.0;
  double rpm_rate_min = -5000.0;
  double rpm_rate_max = 5000.0;
  double steer_min = -0.65;
  double steer_max = 0.65;
  double steer_rate_min = -6.5;
  double steer_rate_max = 6.5;

  // Throws ConfigError on inverted pairs or negative rpm_min.
  void validate() const;

  friend bool operator==(const ActuationLimits&,
                         const ActuationLimits&) = default;
};

// Sequence of states with the action applied from each state. actions has
// one entry fewer than states.
struct Trajectory {
  std::vector<VehicleState> states;
  std::vector<Action> actions;
};

// Maps a finite angle into (-pi, pi]. Throws DomainError if a is not finite.
double wrap_angle(double a);

// Wraps the three attitude angles and clamps rpm and steer to their limits.
VehicleState clamp_state(const VehicleState& s, const ActuationLimits& limits);

// Restricts the rates so that one integration step of length dt keeps rpm
// and steer inside their limits, on top of the fixed rate limits.
// Throws ConfigError if dt <= 0.
Action clamp_action(const Action& a, const VehicleState& s,
                    const ActuationLimits& limits, double dt);

// Per-dimension residual s - g; angles use the shortest-arc difference.
StateVector goal_residual(const VehicleState& s, const VehicleState& g);

inline bool is_angle_index(int i) {
  return i == kRoll || i == kPitch || i == kYaw;
}

}  // namespace airborne

#endif  // AIRBORNE_TYPES_H_
