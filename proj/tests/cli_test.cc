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


#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::current_path() / "cli_scratch";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI inside the scratch directory and returns its exit status.
int run(const std::string& args, std::string* out = nullptr) {
  const fs::path log = scratch() / "stdout.txt";
  const std::string cmd = "cd '" + scratch().string() + "' && '" +
                          AIRBORNE_CLI_PATH + "' " + args + " > '" +
                          log.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> v;
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<double> cells(const std::string& row) {
  std::vector<double> v;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) v.push_back(c.empty() ? NAN : std::stod(c));
  return v;
}

// Value following "key " on its own line of a report.
double report_value(const std::string& text, const std::string& key) {
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) {
    if (l.rfind(key + " ", 0) == 0) return std::stod(l.substr(key.size() + 1));
  }
  return NAN;
}

}  // namespace

TEST_CASE("gen-data writes one row per sensor tick") {
  REQUIRE(run("gen-data --duration 60 --dt-sensor 0.02 --seed 1 --out d60.csv") == 0);
  const auto l = lines(scratch() / "d60.csv");
  REQUIRE(l.size() == 3002);
  CHECK(l[0].rfind("# airborne gen-data", 0) == 0);
  CHECK(l[1].rfind("roll,roll_rate,", 0) == 0);
}

TEST_CASE("plan with the goal at the start holds still") {
  const std::string s = "0,0,0,0,0,0,1000,0";
  REQUIRE(run("plan --state " + s + " --goal " + s +
              " --airtime 1.0 --seed 3 --out plan.csv") == 0);
  const auto traj = lines(scratch() / "plan.csv");
  REQUIRE(traj.size() > 3);
  CHECK(traj[0].rfind("# airborne plan", 0) == 0);
  const std::vector<double> last = cells(traj.back());
  CHECK(std::abs(last[1]) < 0.02);  // roll
  CHECK(std::abs(last[3]) < 0.02);  // pitch
  const auto cyc = lines(scratch() / "plan.csv.cycles.csv");
  CHECK(cyc.size() == 2 + 50);
}

TEST_CASE("train then eval-model reproduces the validation loss") {
  REQUIRE(run("gen-data --duration 20 --seed 2 --out d20.csv") == 0);
  std::string report;
  REQUIRE(run("train --data d20.csv --out m.txt --epochs 3 --seed 5", &report) == 0);
  const double val = report_value(report, "val_mse");
  REQUIRE(std::isfinite(val));
  CHECK(fs::exists(scratch() / "m.txt.history.csv"));
  REQUIRE(run("eval-model --model m.txt --data d20.csv --val-split-seed 5 --out ev.csv") == 0);
  const auto ev = lines(scratch() / "ev.csv");
  REQUIRE(ev.size() == 3);
  CHECK(cells(ev[2])[0] == val);
}

TEST_CASE("eval-model adds oracle errors when given a config") {
  std::ofstream(scratch() / "plain.ini") << "[physical]\ni_fw = 0.05\n";
  REQUIRE(run("--config plain.ini eval-model --model m.txt --data d20.csv --out ev2.csv") == 0);
  const auto ev = lines(scratch() / "ev2.csv");
  REQUIRE(ev.size() == 3);
  CHECK(ev[1].find("oracle_rms_roll_acc") != std::string::npos);
}

TEST_CASE("scenario writes metrics and per-trial logs") {
  REQUIRE(run("scenario --name tgr --controller pid --trials 2 --seed 4 --out sc") == 0);
  const auto m = lines(scratch() / "sc" / "metrics.csv");
  REQUIRE(m.size() >= 3);
  CHECK(m[1] == "metric,controller,mean,std,n,censored");
  int logs = 0;
  for (const auto& e : fs::directory_iterator(scratch() / "sc")) {
    if (e.path().filename() != "metrics.csv") ++logs;
  }
  CHECK(logs == 2);
}

TEST_CASE("bad input maps to distinct exit codes") {
  CHECK(run("no-such-command") == 2);
  CHECK(run("plan --state 1,2 --goal 0,0,0,0,0,0,0,0 --airtime 1 --out x.csv") == 2);
  std::ofstream(scratch() / "bad.ini") << "[planner]\nnonsense = 1\n";
  CHECK(run("--config bad.ini gen-data --duration 1 --out y.csv") == 3);
  CHECK(run("train --data d20.csv --out z.txt --lr -1") == 3);
  CHECK(run("eval-model --model missing.txt --data d20.csv") == 3);
}
