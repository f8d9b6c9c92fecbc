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

#ifndef AIRBORNE_CONFIG_H_
#define AIRBORNE_CONFIG_H_

#include <cstdint>
#include <istream>
#include <string>

#include "airborne/physics.h"
#include "airborne/pid.h"
#include "airborne/planner.h"
#include "airborne/scenario.h"
#include "airborne/training.h"

namespace airborne {

// Every tunable of a run. Loaded from an INI file with sections
// [physical] [limits] [planner] [cost] [pid] [dataset] [training]
// [scenario]; anything absent keeps its default.
struct RunConfig {
  PhysicalParams physical;
  ActuationLimits limits;
  PlannerConfig planner;
  CostSchedule cost;
  PidGains pid;
  DatasetOptions dataset;
  TrainConfig training;
  ScenarioSpec scenario;
  // Cost scales follow the limits unless the file sets them.
  bool cost_scales_explicit = false;

  // Copies limits and physical parameters into the nested configs that
  // carry their own copies, then validates everything.
  void finalize();
};

RunConfig default_config();

// Throws ConfigError naming source, line and key on unknown sections or
// keys and on unparsable values.
RunConfig parse_config(std::istream& in, const std::string& source);
RunConfig load_config(const std::string& path);

// Effective configuration as INI text. Every key is listed except the worker
// counts, which do not affect results. Parsing it back reproduces the same
// configuration.
std::string canonical_config(const RunConfig& cfg);

// 64-bit FNV-1a of canonical_config, for stamping outputs.
std::uint64_t config_hash(const RunConfig& cfg);
std::string hex64(std::uint64_t v);

}  // namespace airborne

#endif  // AIRBORNE_CONFIG_H_
