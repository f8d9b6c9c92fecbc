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

#ifndef AIRBORNE_CSV_H_
#define AIRBORNE_CSV_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "airborne/planner.h"
#include "airborne/scenario.h"
#include "airborne/training.h"

namespace airborne {

// Every CSV starts with one '#' line naming the command and the config hash.
// Readers skip leading '#' lines.
std::string provenance_line(const std::string& invocation,
                            const std::string& config_hash);

// Columns: the 8 state names, rpm_rate_cmd, steer_rate_cmd, roll_acc,
// pitch_acc, yaw_acc. The *_cmd columns hold the applied action.
void write_dataset(std::ostream& out, std::span<const Sample> data,
                   const std::string& comment);
// Throws ArgumentError on a wrong header or malformed row.
std::vector<Sample> read_dataset(std::istream& in);

// t, 8 state columns, applied rpm_rate and steer_rate (empty on the last
// row, which has no action).
void write_trajectory(std::ostream& out, const Trajectory& traj, double dt,
                      const std::string& comment);

// Closed-loop scenario log, with the goal angles at each tick.
void write_episode(std::ostream& out, const EpisodeLog& log,
                   const std::string& comment);

void write_cycles(std::ostream& out, std::span<const CycleRecord> cycles,
                  const std::string& comment);

void write_history(std::ostream& out, std::span<const EpochLoss> history,
                   const std::string& comment);

// One row per metric: mean, population std, value count, censored count,
// plus the success rate row.
void write_metrics(std::ostream& out, const Metrics& m,
                   const std::string& comment);

// Table layout: one row per metric, mean/std/n/censored columns for each
// controller.
void write_comparison(std::ostream& out, const ComparisonTable& table,
                      const std::string& comment);

std::string format_double(double v);

}  // namespace airborne

#endif  // AIRBORNE_CSV_H_
