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


#include <cmath>
#include <random>

#include "airborne/errors.h"
#include "airborne/pid.h"
#include "doctest.h"

namespace ab = airborne;

namespace {

ab::PidGains proportional(double kp_pitch, double kp_roll) {
  ab::PidGains g;
  g.pitch = {kp_pitch, 0.0, 0.0, 1.0};
  g.roll = {kp_roll, 0.0, 0.0, 1.0};
  return g;
}

}  // namespace

TEST_CASE("zero error and fresh state give no action") {
  ab::VehicleState s;
  s.rpm = 1000.0;
  const ab::PidOutput o =
      ab::pid_step(ab::PidGains::defaults(), s, ab::GoalState(s), 0.02, {}, {});
  CHECK(o.raw == ab::Action{});
  CHECK(o.applied == ab::Action{});
}

TEST_CASE("pure proportional arithmetic") {
  ab::VehicleState s;
  s.rpm = 1000.0;
  s.pitch = 0.5;
  const ab::PidOutput o =
      ab::pid_step(proportional(100.0, 0.0), s, ab::GoalState{}, 0.02, {}, {});
  CHECK(o.raw.rpm_rate == 50.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-6.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    ab::VehicleState x;
    x.rpm = 1000.0;
    x.pitch = ang(rng);
    x.roll = ang(rng);
    ab::GoalState g;
    g.pitch = ang(rng);
    g.roll = ang(rng);
    const ab::PidOutput p = ab::pid_step(proportional(7.0, 3.0), x, g, 0.02, {}, {});
    CHECK(p.raw.rpm_rate == 7.0 * ab::wrap_angle(x.pitch - g.pitch));
    CHECK(p.raw.steer_rate == 3.0 * ab::wrap_angle(g.roll - x.roll));
  }
}

TEST_CASE("actuation limits override the error signal") {
  ab::VehicleState s;
  s.rpm = 1980.0;
  s.pitch = 0.5;
  const ab::PidOutput o =
      ab::pid_step(proportional(100.0, 0.0), s, ab::GoalState{}, 0.02, {}, {});
  CHECK(o.raw.rpm_rate > 0.0);
  CHECK(o.applied.rpm_rate == 0.0);
}

TEST_CASE("integral state stays within its limit") {
  ab::PidGains g;
  g.pitch = {0.0, 10.0, 0.0, 0.3};
  g.roll = {0.0, 10.0, 0.0, 0.3};
  ab::VehicleState s;
  s.rpm = 1000.0;
  s.pitch = 1.0;
  s.roll = -1.0;
  ab::PidState st;
  for (int i = 0; i < 500; ++i) {
    const ab::PidOutput o = ab::pid_step(g, s, ab::GoalState{}, 0.02, st, {});
    st = o.state;
    CHECK(std::abs(st.pitch.integral) <= 0.3);
    CHECK(std::abs(st.roll.integral) <= 0.3);
  }
  CHECK(std::abs(st.pitch.integral) == doctest::Approx(0.3));
}

TEST_CASE("derivative term uses the stored previous error") {
  ab::PidGains g;
  g.pitch = {0.0, 0.0, 2.0, 1.0};
  ab::VehicleState s;
  s.rpm = 1000.0;
  s.pitch = 0.1;
  const ab::PidOutput first = ab::pid_step(g, s, ab::GoalState{}, 0.02, {}, {});
  s.pitch = 0.2;
  const ab::PidOutput second =
      ab::pid_step(g, s, ab::GoalState{}, 0.02, first.state, {});
  CHECK(second.raw.rpm_rate == doctest::Approx(2.0 * 0.1 / 0.02));
  // Same explicit state in, same output out.
  const ab::PidOutput again =
      ab::pid_step(g, s, ab::GoalState{}, 0.02, first.state, {});
  CHECK(again.raw == second.raw);
}

TEST_CASE("gain validation") {
  CHECK_NOTHROW(ab::PidGains::defaults().validate());
  ab::PidGains bad = ab::PidGains::defaults();
  bad.roll.kd = NAN;
  CHECK_THROWS_AS(bad.validate(), ab::ConfigError);
  CHECK_THROWS_AS(ab::pid_step(ab::PidGains::defaults(), {}, {}, 0.0, {}, {}),
                  ab::ConfigError);
}
