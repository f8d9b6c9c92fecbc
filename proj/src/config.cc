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

#include "airborne/config.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "airborne/errors.h"

namespace airborne {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  const double d = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("trailing characters");
  return d;
}

long long to_int(const std::string& v) {
  std::size_t used = 0;
  const long long i = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument("trailing characters");
  return i;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

void add_double(std::vector<Field>& f, const std::string& sec,
                const std::string& key, double* p) {
  f.push_back({sec, key, [p](const std::string& v) { *p = to_double(v); },
               [p] { return fmt(*p); }});
}

void add_int(std::vector<Field>& f, const std::string& sec,
             const std::string& key, int* p) {
  f.push_back({sec, key,
               [p](const std::string& v) { *p = static_cast<int>(to_int(v)); },
               [p] { return std::to_string(*p); }});
}

void add_seed(std::vector<Field>& f, const std::string& sec,
              const std::string& key, std::uint64_t* p) {
  f.push_back({sec, key,
               [p](const std::string& v) {
                 std::size_t used = 0;
                 if (!v.empty() && v[0] == '-') {
                   throw std::invalid_argument("negative seed");
                 }
                 *p = std::stoull(v, &used);
                 if (used != v.size()) throw std::invalid_argument("seed");
               },
               [p] { return std::to_string(*p); }});
}

std::string segments_text(const std::vector<WeightSegment>& segs) {
  std::string out;
  for (const WeightSegment& s : segs) {
    if (!out.empty()) out += ", ";
    out += fmt(s.u_start) + ":" + fmt(s.weight);
  }
  return out;
}

std::vector<WeightSegment> parse_segments(const std::string& v) {
  std::vector<WeightSegment> out;
  for (const std::string& item : split(v, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("expected u:weight pairs");
    }
    out.push_back({to_double(trim(item.substr(0, colon))),
                   to_double(trim(item.substr(colon + 1)))});
  }
  return out;
}

std::string disturbances_text(const std::vector<Disturbance>& ds) {
  std::string out;
  for (const Disturbance& d : ds) {
    if (!out.empty()) out += ", ";
    out += fmt(d.time) + ":" + (d.axis == 0 ? "roll" : "pitch") + ":" +
           fmt(d.impulse);
  }
  return out;
}

std::vector<Disturbance> parse_disturbances(const std::string& v) {
  std::vector<Disturbance> out;
  for (const std::string& item : split(v, ',')) {
    const std::vector<std::string> parts = split(item, ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("expected time:axis:impulse");
    }
    Disturbance d;
    d.time = to_double(parts[0]);
    if (parts[1] == "roll") {
      d.axis = 0;
    } else if (parts[1] == "pitch") {
      d.axis = 1;
    } else {
      throw std::invalid_argument("axis must be roll or pitch");
    }
    d.impulse = to_double(parts[2]);
    out.push_back(d);
  }
  return out;
}

std::vector<Field> fields(RunConfig& c) {
  std::vector<Field> f;
  PhysicalParams& ph = c.physical;
  add_double(f, "physical", "i_fw", &ph.i_fw);
  add_double(f, "physical", "i_rw", &ph.i_rw);
  add_double(f, "physical", "i_chassis_roll", &ph.i_chassis_roll);
  add_double(f, "physical", "i_chassis_pitch", &ph.i_chassis_pitch);
  add_double(f, "physical", "yaw_noise_std", &ph.yaw_noise_std);
  add_double(f, "physical", "gravity", &ph.gravity);

  ActuationLimits& l = c.limits;
  add_double(f, "limits", "rpm_min", &l.rpm_min);
  add_double(f, "limits", "rpm_max", &l.rpm_max);
  add_double(f, "limits", "rpm_rate_min", &l.rpm_rate_min);
  add_double(f, "limits", "rpm_rate_max", &l.rpm_rate_max);
  add_double(f, "limits", "steer_min", &l.steer_min);
  add_double(f, "limits", "steer_max", &l.steer_max);
  add_double(f, "limits", "steer_rate_min", &l.steer_rate_min);
  add_double(f, "limits", "steer_rate_max", &l.steer_rate_max);

  PlannerConfig& pl = c.planner;
  add_double(f, "planner", "dt", &pl.dt);
  add_int(f, "planner", "sample_count", &pl.sample_count);
  add_double(f, "planner", "sigma_rpm_rate", &pl.sigma_rpm_rate);
  add_double(f, "planner", "sigma_steer_rate", &pl.sigma_steer_rate);
  add_double(f, "planner", "replan_hz", &pl.replan_hz);
  add_seed(f, "planner", "seed", &pl.seed);
  add_int(f, "planner", "workers", &pl.workers);
  for (int i = 0; i < kStateDim; ++i) {
    add_double(f, "planner",
               "tolerance_" + std::string(kStateNames[i]),
               &pl.feasibility_tolerance[i]);
  }

  for (int i = 0; i < kStateDim; ++i) {
    const std::string name(kStateNames[i]);
    auto* segs = &c.cost.weights[i];
    f.push_back({"cost", name,
                 [segs](const std::string& v) { *segs = parse_segments(v); },
                 [segs] { return segments_text(*segs); }});
    double* scale = &c.cost.scales[i];
    bool* flag = &c.cost_scales_explicit;
    f.push_back({"cost", name + "_scale",
                 [scale, flag](const std::string& v) {
                   *scale = to_double(v);
                   *flag = true;
                 },
                 [scale] { return fmt(*scale); }});
  }

  for (auto [name, loop] : {std::pair{"pitch", &c.pid.pitch},
                            std::pair{"roll", &c.pid.roll}}) {
    const std::string p(name);
    add_double(f, "pid", p + "_kp", &loop->kp);
    add_double(f, "pid", p + "_ki", &loop->ki);
    add_double(f, "pid", p + "_kd", &loop->kd);
    add_double(f, "pid", p + "_integral_limit", &loop->integral_limit);
  }

  DatasetOptions& d = c.dataset;
  add_double(f, "dataset", "duration", &d.duration);
  add_double(f, "dataset", "dt_sensor", &d.dt_sensor);
  add_double(f, "dataset", "rate_noise_std", &d.rate_noise_std);
  add_double(f, "dataset", "episode_length", &d.episode_length);
  add_seed(f, "dataset", "seed", &d.seed);

  TrainConfig& t = c.training;
  add_int(f, "training", "epochs", &t.epochs);
  add_int(f, "training", "batch_size", &t.batch_size);
  add_double(f, "training", "learning_rate", &t.learning_rate);
  add_seed(f, "training", "seed", &t.seed);
  add_double(f, "training", "val_fraction", &t.val_fraction);
  add_double(f, "training", "momentum", &t.momentum);
  add_double(f, "training", "model_dt", &t.model_dt);
  add_int(f, "training", "workers", &t.workers);
  f.push_back({"training", "optimizer",
               [&t](const std::string& v) {
                 if (v == "adam") {
                   t.optimizer = Optimizer::kAdam;
                 } else if (v == "sgd") {
                   t.optimizer = Optimizer::kSgdMomentum;
                 } else {
                   throw std::invalid_argument("optimizer must be adam or sgd");
                 }
               },
               [&t] {
                 return std::string(t.optimizer == Optimizer::kAdam ? "adam"
                                                                     : "sgd");
               }});
  f.push_back({"training", "hidden",
               [&t](const std::string& v) {
                 const auto parts = split(v, ',');
                 if (parts.size() != kLayerCount - 1) {
                   throw std::invalid_argument("hidden needs 3 widths");
                 }
                 for (std::size_t i = 0; i < parts.size(); ++i) {
                   t.layer_dims[i + 1] = static_cast<int>(to_int(parts[i]));
                 }
               },
               [&t] {
                 return std::to_string(t.layer_dims[1]) + ", " +
                        std::to_string(t.layer_dims[2]) + ", " +
                        std::to_string(t.layer_dims[3]);
               }});

  ScenarioSpec& s = c.scenario;
  const std::string sc = "scenario";
  add_double(f, sc, "control_hz", &s.control_hz);
  add_double(f, sc, "angle_threshold", &s.thresholds.angle);
  add_double(f, sc, "rate_threshold", &s.thresholds.rate);
  add_double(f, sc, "stuck_dwell", &s.thresholds.stuck_dwell);
  add_double(f, sc, "init_rpm_min", &s.init_rpm_min);
  add_double(f, sc, "init_rpm_max", &s.init_rpm_max);
  add_double(f, sc, "goal_rpm", &s.goal_rpm);
  add_double(f, sc, "plan_window", &s.plan_window);
  add_double(f, sc, "tt_amplitude", &s.tt_amplitude);
  add_double(f, sc, "tt_period", &s.tt_period);
  add_double(f, sc, "tt_lookahead", &s.tt_lookahead);
  add_double(f, sc, "tt_max_error", &s.tt_max_error);
  add_double(f, sc, "tt_settle_time", &s.tt_settle_time);
  add_double(f, sc, "rsc_magnitude", &s.rsc_magnitude);
  add_int(f, sc, "rsc_goal_count", &s.rsc_goal_count);
  add_double(f, sc, "rsc_hold", &s.rsc_hold);
  add_double(f, sc, "rsc_reach_limit", &s.rsc_reach_limit);
  add_double(f, sc, "tgr_time_min", &s.tgr_time_min);
  add_double(f, sc, "tgr_time_max", &s.tgr_time_max);
  add_double(f, sc, "tgr_goal_range", &s.tgr_goal_range);
  add_double(f, sc, "tgr_post_window", &s.tgr_post_window);
  add_double(f, sc, "ss_goal_roll", &s.ss_goal_roll);
  add_double(f, sc, "ss_goal_pitch", &s.ss_goal_pitch);
  add_double(f, sc, "ss_hold", &s.ss_hold);
  add_double(f, sc, "ss_reaction_floor", &s.ss_reaction_floor);
  f.push_back({sc, "ss_disturbances",
               [&s](const std::string& v) {
                 s.ss_disturbances = parse_disturbances(v);
               },
               [&s] { return disturbances_text(s.ss_disturbances); }});
  add_double(f, sc, "ramp_speed", &s.ramp_speed);
  add_double(f, sc, "ramp_angle", &s.ramp_angle);
  add_double(f, sc, "ramp_height_delta", &s.ramp_height_delta);
  add_double(f, sc, "launch_angle_std", &s.launch_angle_std);
  add_double(f, sc, "launch_rate_std", &s.launch_rate_std);
  add_double(f, sc, "launch_rpm_min", &s.launch_rpm_min);
  add_double(f, sc, "launch_rpm_max", &s.launch_rpm_max);
  add_double(f, sc, "ramp_goal_roll", &s.ramp_goal.roll);
  add_double(f, sc, "ramp_goal_pitch", &s.ramp_goal.pitch);
  add_double(f, sc, "ramp_goal_rpm", &s.ramp_goal.rpm);
  add_double(f, sc, "ramp_landing_tolerance", &s.ramp_landing_tolerance);
  add_int(f, sc, "ramp_max_attempts", &s.ramp_max_attempts);
  return f;
}

}  // namespace

void RunConfig::finalize() {
  physical.validate();
  limits.validate();
  planner.limits = limits;
  scenario.limits = limits;
  scenario.env_params = physical;
  if (!cost_scales_explicit) {
    cost.scales = CostSchedule::defaults(limits).scales;
  }
  planner.validate();
  cost.validate();
  pid.validate();
  training.validate();
  scenario.validate();
  if (!(dataset.duration > 0.0) || !(dataset.dt_sensor > 0.0) ||
      !(dataset.episode_length > 0.0) || dataset.rate_noise_std < 0.0) {
    throw ConfigError("dataset: duration, dt_sensor and episode_length must "
                      "be > 0 and rate_noise_std >= 0");
  }
}

RunConfig default_config() {
  RunConfig c;
  c.cost = CostSchedule::flight(c.limits);
  c.pid = PidGains::defaults();
  c.finalize();
  return c;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c = default_config();
  const std::vector<Field> table = fields(c);
  std::string section;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail("malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      bool known = false;
      for (const Field& f : table) known = known || f.section == section;
      if (!known) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail("expected key = value, got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    const auto hash = value.find(" #");
    if (hash != std::string::npos) value = trim(value.substr(0, hash));
    if (section.empty()) fail("key '" + key + "' outside any section");
    const Field* match = nullptr;
    for (const Field& f : table) {
      if (f.section == section && f.key == key) match = &f;
    }
    if (match == nullptr) {
      fail("unknown key '" + key + "' in [" + section + "]");
    }
    try {
      match->set(value);
    } catch (const std::exception& e) {
      fail("bad value '" + value + "' for key '" + key + "': " + e.what());
    }
  }
  try {
    c.finalize();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string canonical_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  std::string out;
  std::string section;
  for (const Field& f : fields(copy)) {
    // Worker counts change scheduling, not results.
    if (f.key == "workers") continue;
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get() + "\n";
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace airborne
