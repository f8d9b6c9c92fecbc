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
#include <vector>

#include "airborne/csv.h"
#include "airborne/errors.h"
#include "airborne/physics.h"
#include "airborne/training.h"
#include "doctest.h"

namespace ab = airborne;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("dataset round trip is exact") {
  ab::DatasetOptions o;
  o.duration = 2.0;
  o.seed = 3;
  const auto data = ab::generate_dataset(ab::PhysicalParams{}, {}, o);
  std::stringstream ss;
  ab::write_dataset(ss, data, ab::provenance_line("gen-data", "abc"));
  CHECK(first_line(ss.str()) == "# airborne gen-data config=abc");
  const auto back = ab::read_dataset(ss);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back[i].state == data[i].state);
    CHECK(back[i].action == data[i].action);
    CHECK(back[i].label == data[i].label);
  }
}

TEST_CASE("malformed datasets are rejected") {
  std::stringstream wrong_header("a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(ab::read_dataset(wrong_header), ab::ArgumentError);
  std::stringstream ok;
  ab::write_dataset(ok, std::vector<ab::Sample>(1), "# x");
  std::string text = ok.str();
  text += "1,2\n";
  std::stringstream short_row(text);
  CHECK_THROWS_AS(ab::read_dataset(short_row), ab::ArgumentError);
}

TEST_CASE("doubles print with round-trip precision") {
  const double v = 0.1 + 0.2;
  CHECK(std::stod(ab::format_double(v)) == v);
}

TEST_CASE("history and cycle logs have stable headers") {
  std::stringstream h;
  ab::write_history(h, std::vector<ab::EpochLoss>{{1, 0.5, 0.25}}, "# c");
  CHECK(h.str() == "# c\nepoch,train_mse,val_mse\n1,0.5,0.25\n");

  std::stringstream c;
  ab::CycleRecord r;
  r.cycle = 0;
  r.t_remaining = 1.0;
  r.horizon = 5;
  r.best_action = {100.0, -0.5};
  r.best_cost = 2.0;
  r.feasible = true;
  ab::write_cycles(c, std::vector<ab::CycleRecord>{r}, "# c");
  CHECK(c.str() ==
        "# c\ncycle,t_remaining,horizon,rpm_rate,steer_rate,best_cost,feasible\n"
        "0,1,5,100,-0.5,2,1\n");
}

TEST_CASE("trajectory rows carry time and action") {
  ab::Trajectory t;
  t.states.resize(3);
  t.actions = {{1.0, 2.0}, {3.0, 4.0}};
  std::stringstream ss;
  ab::write_trajectory(ss, t, 0.5, "# c");
  std::string line;
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  CHECK(rows == 2 + 3);
}
