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

#include "airborne/csv.h"

#include <cstdio>
#include <sstream>

#include "airborne/errors.h"

namespace airborne {
namespace {

const char* const kDatasetHeader =
    "roll,roll_rate,pitch,pitch_rate,yaw,yaw_rate,rpm,steer,"
    "rpm_rate_cmd,steer_rate_cmd,roll_acc,pitch_acc,yaw_acc";

void state_columns(std::ostream& out) {
  for (int i = 0; i < kStateDim; ++i) {
    out << (i ? "," : "") << kStateNames[i];
  }
}

void state_values(std::ostream& out, const VehicleState& s) {
  const StateVector v = s.to_array();
  for (int i = 0; i < kStateDim; ++i) {
    out << (i ? "," : "") << format_double(v[i]);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string provenance_line(const std::string& invocation,
                            const std::string& config_hash) {
  return "# airborne " + invocation + " config=" + config_hash;
}

void write_dataset(std::ostream& out, std::span<const Sample> data,
                   const std::string& comment) {
  out << comment << "\n" << kDatasetHeader << "\n";
  for (const Sample& s : data) {
    state_values(out, s.state);
    out << "," << format_double(s.action.rpm_rate) << ","
        << format_double(s.action.steer_rate) << ","
        << format_double(s.label.roll_acc) << ","
        << format_double(s.label.pitch_acc) << ","
        << format_double(s.label.yaw_acc) << "\n";
  }
}

std::vector<Sample> read_dataset(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool header = false;
  std::vector<Sample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line[0] == '#') continue;
      if (line != kDatasetHeader) {
        throw ArgumentError("dataset: unexpected header on line " +
                            std::to_string(line_no));
      }
      header = true;
      continue;
    }
    double v[13];
    std::stringstream ss(line);
    std::string cell;
    int n = 0;
    try {
      while (std::getline(ss, cell, ',')) {
        if (n >= 13) break;
        std::size_t used = 0;
        v[n] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        ++n;
      }
    } catch (const std::exception&) {
      throw ArgumentError("dataset: bad number on line " +
                          std::to_string(line_no));
    }
    if (n != 13 || ss.rdbuf()->in_avail() > 0) {
      throw ArgumentError("dataset: expected 13 columns on line " +
                          std::to_string(line_no));
    }
    Sample s;
    s.state = VehicleState::from_array(std::span<const double>(v, kStateDim));
    s.action = {v[8], v[9]};
    s.label = {v[10], v[11], v[12]};
    out.push_back(s);
  }
  if (!header) throw ArgumentError("dataset: missing header");
  return out;
}

void write_trajectory(std::ostream& out, const Trajectory& traj, double dt,
                      const std::string& comment) {
  out << comment << "\nt,";
  state_columns(out);
  out << ",rpm_rate,steer_rate\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << format_double(k * dt) << ",";
    state_values(out, traj.states[k]);
    if (k < traj.actions.size()) {
      out << "," << format_double(traj.actions[k].rpm_rate) << ","
          << format_double(traj.actions[k].steer_rate) << "\n";
    } else {
      out << ",,\n";
    }
  }
}

void write_episode(std::ostream& out, const EpisodeLog& log,
                   const std::string& comment) {
  out << comment << "\nt,";
  state_columns(out);
  out << ",rpm_rate,steer_rate,goal_roll,goal_pitch\n";
  for (std::size_t k = 0; k < log.states.size(); ++k) {
    out << format_double(log.times[k]) << ",";
    state_values(out, log.states[k]);
    if (k < log.actions.size()) {
      out << "," << format_double(log.actions[k].rpm_rate) << ","
          << format_double(log.actions[k].steer_rate) << ","
          << format_double(log.goals[k].roll) << ","
          << format_double(log.goals[k].pitch) << "\n";
    } else {
      out << ",,,,\n";
    }
  }
}

void write_cycles(std::ostream& out, std::span<const CycleRecord> cycles,
                  const std::string& comment) {
  out << comment << "\n"
      << "cycle,t_remaining,horizon,rpm_rate,steer_rate,best_cost,feasible\n";
  for (const CycleRecord& c : cycles) {
    out << c.cycle << "," << format_double(c.t_remaining) << "," << c.horizon
        << "," << format_double(c.best_action.rpm_rate) << ","
        << format_double(c.best_action.steer_rate) << ","
        << format_double(c.best_cost) << "," << (c.feasible ? 1 : 0) << "\n";
  }
}

void write_history(std::ostream& out, std::span<const EpochLoss> history,
                   const std::string& comment) {
  out << comment << "\nepoch,train_mse,val_mse\n";
  for (const EpochLoss& e : history) {
    out << e.epoch << "," << format_double(e.train_mse) << ","
        << format_double(e.val_mse) << "\n";
  }
}

void write_metrics(std::ostream& out, const Metrics& m,
                   const std::string& comment) {
  out << comment << "\nmetric,controller,mean,std,n,censored\n";
  for (const MetricStat& s : m.stats) {
    out << s.name << "," << m.controller << "," << format_double(s.mean())
        << "," << format_double(s.stddev()) << "," << s.values.size() << ","
        << s.censored << "\n";
  }
  out << success_row(m.kind) << "," << m.controller << ","
      << format_double(m.success_rate()) << ",0," << m.trials << ",0\n";
}

void write_comparison(std::ostream& out, const ComparisonTable& table,
                      const std::string& comment) {
  out << comment << "\nmetric";
  for (const std::string& c : table.controllers) {
    out << "," << c << "_mean," << c << "_std," << c << "_n," << c
        << "_censored";
  }
  out << "\n";
  const std::size_t nc = table.controllers.size();
  for (std::size_t i = 0; i + nc <= table.metrics.size(); i += nc) {
    const ScenarioKind kind = table.metrics[i].kind;
    for (const std::string& row : metric_rows(kind)) {
      out << row;
      for (std::size_t j = 0; j < nc; ++j) {
        const MetricStat* s = table.metrics[i + j].find(row);
        out << "," << format_double(s->mean()) << ","
            << format_double(s->stddev()) << "," << s->values.size() << ","
            << s->censored;
      }
      out << "\n";
    }
    out << success_row(kind);
    for (std::size_t j = 0; j < nc; ++j) {
      const Metrics& m = table.metrics[i + j];
      out << "," << format_double(m.success_rate()) << ",0," << m.trials
          << ",0";
    }
    out << "\n";
  }
}

}  // namespace airborne
