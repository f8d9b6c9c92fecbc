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

#include "airborne/types.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "airborne/errors.h"

namespace airborne {

StateVector VehicleState::to_array() const {
  return {roll, roll_rate, pitch, pitch_rate, yaw, yaw_rate, rpm, steer};
}

VehicleState VehicleState::from_array(std::span<const double> v) {
  if (v.size() != kStateDim) {
    throw ArgumentError("state vector must have 8 entries, got " +
                        std::to_string(v.size()));
  }
  VehicleState s{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  if (!s.is_finite()) throw DomainError("state has a non-finite entry");
  return s;
}

bool VehicleState::is_finite() const {
  const StateVector v = to_array();
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

void ActuationLimits::validate() const {
  auto check = [](double lo, double hi, const char* name) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw ConfigError(std::string("actuation limits: ") + name +
                        " min must not exceed max");
    }
  };
  check(rpm_min, rpm_max, "rpm");
  check(rpm_rate_min, rpm_rate_max, "rpm_rate");
  check(steer_min, steer_max, "steer");
  check(steer_rate_min, steer_rate_max, "steer_rate");
  if (rpm_min < 0.0) {
    throw ConfigError("actuation limits: rpm_min must be >= 0 (wheels only spin forward)");
  }
}

double wrap_angle(double a) {
  if (!std::isfinite(a)) throw DomainError("wrap_angle: non-finite angle");
  // remainder() is exact and lands in [-pi, pi].
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

VehicleState clamp_state(const VehicleState& s, const ActuationLimits& limits) {
  if (!s.is_finite()) throw DomainError("clamp_state: non-finite state");
  VehicleState out = s;
  out.roll = wrap_angle(s.roll);
  out.pitch = wrap_angle(s.pitch);
  out.yaw = wrap_angle(s.yaw);
  out.rpm = std::clamp(s.rpm, limits.rpm_min, limits.rpm_max);
  out.steer = std::clamp(s.steer, limits.steer_min, limits.steer_max);
  return out;
}

namespace {

double clamp_rate(double rate, double position, double pos_min, double pos_max,
                  double rate_min, double rate_max, double dt) {
  const double lo = std::max(rate_min, (pos_min - position) / dt);
  const double hi = std::min(rate_max, (pos_max - position) / dt);
  if (lo > hi) return hi;  // only reachable for positions outside the limits
  return std::clamp(rate, lo, hi);
}

}  // namespace

Action clamp_action(const Action& a, const VehicleState& s,
                    const ActuationLimits& limits, double dt) {
  if (!(dt > 0.0)) throw ConfigError("clamp_action: dt must be > 0");
  if (!std::isfinite(a.rpm_rate) || !std::isfinite(a.steer_rate)) {
    throw DomainError("clamp_action: non-finite action");
  }
  return {clamp_rate(a.rpm_rate, s.rpm, limits.rpm_min, limits.rpm_max,
                     limits.rpm_rate_min, limits.rpm_rate_max, dt),
          clamp_rate(a.steer_rate, s.steer, limits.steer_min, limits.steer_max,
                     limits.steer_rate_min, limits.steer_rate_max, dt)};
}

StateVector goal_residual(const VehicleState& s, const VehicleState& g) {
  const StateVector sv = s.to_array();
  const StateVector gv = g.to_array();
  StateVector r{};
  for (int i = 0; i < kStateDim; ++i) {
    const double d = sv[i] - gv[i];
    r[i] = is_angle_index(i) ? wrap_angle(d) : d;
  }
  return r;
}

}  // namespace airborne
