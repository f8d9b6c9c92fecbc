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


#include <sstream>
#include <string>

#include "airborne/config.h"
#include "airborne/errors.h"
#include "doctest.h"

namespace ab = airborne;

namespace {

ab::RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return ab::parse_config(in, "test.ini");
}

}  // namespace

TEST_CASE("empty config equals the defaults") {
  const ab::RunConfig d = ab::default_config();
  const ab::RunConfig p = parse("");
  CHECK(ab::canonical_config(p) == ab::canonical_config(d));
  CHECK(ab::config_hash(p) == ab::config_hash(d));
}

TEST_CASE("canonical text parses back to the same config") {
  const ab::RunConfig a = parse(
      "# comment\n"
      "[physical]\ni_fw = 0.07\n"
      "[planner]\nsample_count = 123\ntolerance_roll = 0.05\n"
      "[cost]\nroll = 0:2, 0.5:0.5\nroll_scale = 0.25\n"
      "[pid]\npitch_kp = 42\n"
      "[training]\noptimizer = sgd\nhidden = 32, 16, 8\n"
      "[scenario]\nss_disturbances = 1.5:pitch:0.4, 3:roll:-0.2\n");
  CHECK(a.physical.i_fw == 0.07);
  CHECK(a.planner.sample_count == 123);
  CHECK(a.planner.feasibility_tolerance[0] == 0.05);
  CHECK(a.cost.weight(0, 0.7) == 0.5);
  CHECK(a.cost.scales[0] == 0.25);
  CHECK(a.pid.pitch.kp == 42.0);
  CHECK(a.training.optimizer == ab::Optimizer::kSgdMomentum);
  CHECK(a.training.layer_dims[1] == 32);
  REQUIRE(a.scenario.ss_disturbances.size() == 2);
  CHECK(a.scenario.ss_disturbances[0].axis == 1);
  CHECK(a.scenario.ss_disturbances[1].impulse == -0.2);

  const std::string text = ab::canonical_config(a);
  const ab::RunConfig b = parse(text);
  CHECK(ab::canonical_config(b) == text);
  CHECK(ab::config_hash(a) == ab::config_hash(b));
  CHECK(ab::config_hash(a) != ab::config_hash(ab::default_config()));
}

TEST_CASE("worker counts do not change the hash") {
  const ab::RunConfig a = parse("[planner]\nworkers = 1\n");
  const ab::RunConfig b = parse("[planner]\nworkers = 8\n[training]\nworkers = 3\n");
  CHECK(ab::config_hash(a) == ab::config_hash(b));
}

TEST_CASE("errors name the source line") {
  try {
    parse("[planner]\n\nbogus = 1\n");
    FAIL("expected a config error");
  } catch (const ab::ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("test.ini:3") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("[nowhere]\nx = 1\n"), ab::ConfigError);
  CHECK_THROWS_AS(parse("[planner]\nsample_count = many\n"), ab::ConfigError);
  CHECK_THROWS_AS(parse("[planner]\nsample_count = 0\n"), ab::ConfigError);
  CHECK_THROWS_AS(parse("[limits]\nsteer_min = 1\n"), ab::ConfigError);
  CHECK_THROWS_AS(parse("no section = 1\n"), ab::ConfigError);
  CHECK_THROWS_AS(ab::load_config("/nonexistent.ini"), ab::ConfigError);
}

TEST_CASE("hash formatting") {
  CHECK(ab::hex64(0) == "0000000000000000");
  CHECK(ab::hex64(0xdeadbeefULL) == "00000000deadbeef");
}
