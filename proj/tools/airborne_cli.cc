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

// Command-line front end: data generation, training, evaluation, planning
// and scenario runs. Exit codes: 0 ok, 2 usage, 3 configuration or input
// format, 4 runtime failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airborne/config.h"
#include "airborne/csv.h"
#include "airborne/errors.h"
#include "airborne/phli.h"
#include "airborne/physics.h"
#include "airborne/planner.h"
#include "airborne/scenario.h"
#include "airborne/training.h"

namespace ab = airborne;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

struct Common {
  std::string config_path;
  int workers = -1;  // -1: keep the config value
};

ab::RunConfig load(const Common& c) {
  ab::RunConfig cfg =
      c.config_path.empty() ? ab::default_config() : ab::load_config(c.config_path);
  if (c.workers >= 0) {
    cfg.planner.workers = c.workers;
    cfg.training.workers = c.workers;
  }
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ab::ArgumentError("cannot write '" + path + "'");
  return out;
}

std::string stamp(const std::string& command, const ab::RunConfig& cfg,
                  const std::string& detail) {
  std::string inv = command;
  if (!detail.empty()) inv += " " + detail;
  return ab::provenance_line(inv, ab::hex64(ab::config_hash(cfg)));
}

ab::VehicleState parse_state(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ab::ArgumentError(std::string(what) + ": bad number '" + cell + "'");
    }
  }
  if (v.size() != ab::kStateDim) {
    throw ab::ArgumentError(std::string(what) + ": expected 8 comma-separated "
                            "values (roll, roll_rate, pitch, pitch_rate, yaw, "
                            "yaw_rate, rpm, steer)");
  }
  return ab::VehicleState::from_array(v);
}

std::shared_ptr<const ab::ForwardModel> planner_model(
    const ab::RunConfig& cfg, const std::string& model_path) {
  if (model_path.empty() || model_path == "oracle") {
    return std::make_shared<ab::OracleForwardModel>(cfg.physical, cfg.limits,
                                                    cfg.planner.dt);
  }
  auto m = std::make_shared<const ab::PhliModel>(ab::load_model(model_path));
  return std::make_shared<ab::PhliForwardModel>(m, cfg.limits);
}

std::unique_ptr<ab::Controller> make_controller(const std::string& name,
                                                const ab::RunConfig& cfg,
                                                const std::string& model_path) {
  if (name == "dom") {
    return std::make_unique<ab::DomController>(planner_model(cfg, model_path),
                                               cfg.planner, cfg.cost);
  }
  if (name == "pid") {
    return std::make_unique<ab::PidController>(cfg.pid, cfg.limits,
                                               cfg.scenario.control_period());
  }
  if (name == "zero") return std::make_unique<ab::ZeroController>();
  throw ab::ArgumentError("unknown controller '" + name +
                          "' (expected dom, pid or zero)");
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, int trials) {
  if (trials < 1) throw ab::ArgumentError("--trials must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < trials; ++i) seeds.push_back(base + i);
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Airborne wheeled-robot attitude control toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "INI configuration file");
  app.add_option("--workers", common.workers,
                 "worker threads (0 = all cores); results do not depend on it")
      ->check(CLI::NonNegativeNumber);

  // gen-data
  std::string data_out;
  std::optional<double> duration, dt_sensor, noise;
  std::optional<std::uint64_t> data_seed;
  auto* gen = app.add_subcommand("gen-data", "simulate a training dataset");
  gen->add_option("--out", data_out, "dataset CSV")->required();
  gen->add_option("--duration", duration, "seconds of flight to simulate");
  gen->add_option("--dt-sensor", dt_sensor, "sensor sampling interval, s");
  gen->add_option("--noise", noise, "rate noise std, rad/s");
  gen->add_option("--seed", data_seed, "dataset seed");

  // train
  std::string train_data, model_out, history_out;
  std::optional<int> epochs, batch;
  std::optional<double> lr;
  std::optional<std::uint64_t> train_seed;
  auto* tr = app.add_subcommand("train", "fit the learned dynamics model");
  tr->add_option("--data", train_data, "dataset CSV")->required();
  tr->add_option("--out", model_out, "model file")->required();
  tr->add_option("--history", history_out,
                 "per-epoch loss CSV (default: <out>.history.csv)");
  tr->add_option("--epochs", epochs, "training epochs");
  tr->add_option("--lr", lr, "learning rate");
  tr->add_option("--batch", batch, "minibatch size");
  tr->add_option("--seed", train_seed, "split, shuffle and init seed");

  // eval-model
  std::string eval_model, eval_data, eval_out;
  std::optional<std::uint64_t> eval_split_seed;
  auto* ev = app.add_subcommand("eval-model", "score a model on a dataset");
  ev->add_option("--model", eval_model, "model file")->required();
  ev->add_option("--data", eval_data, "dataset CSV")->required();
  ev->add_option("--val-split-seed", eval_split_seed,
                 "score only the validation split train used with this seed");
  ev->add_option("--out", eval_out, "metrics CSV (default stdout)");

  // plan
  std::string plan_model, plan_state, plan_goal, plan_out, plan_cycles;
  double plan_time = 0.0;
  std::optional<std::uint64_t> plan_seed;
  auto* pl = app.add_subcommand(
      "plan", "fly one closed-loop planning episode on the simulator");
  pl->add_option("--model", plan_model,
                 "model file, or 'oracle' for the analytic model")
      ->default_val("oracle");
  pl->add_option("--state", plan_state, "initial state, 8 comma-separated values")
      ->required();
  pl->add_option("--goal", plan_goal, "goal state, 8 comma-separated values")
      ->required();
  pl->add_option("--airtime", plan_time, "seconds until the goal is due")
      ->required();
  pl->add_option("--seed", plan_seed, "planner sampling seed");
  pl->add_option("--out", plan_out, "trajectory CSV")->required();
  pl->add_option("--cycles", plan_cycles,
                 "per-cycle planner log CSV (default: <out>.cycles.csv)");

  // scenario
  std::string sc_name, sc_controller = "dom", sc_model, sc_out;
  int sc_trials = 1;
  std::uint64_t sc_seed = 1;
  auto* sc = app.add_subcommand("scenario", "run one benchmark scenario");
  sc->add_option("--name", sc_name, "tt, rsc, tgr, ss or ramp")->required();
  sc->add_option("--controller", sc_controller, "dom, pid or zero");
  sc->add_option("--model", sc_model,
                 "model file for dom, or 'oracle' (default)");
  sc->add_option("--trials", sc_trials, "number of trials");
  sc->add_option("--seed", sc_seed, "seed of the first trial");
  sc->add_option("--out", sc_out,
                 "output directory: metrics.csv and one episode CSV per trial")
      ->required();

  // compare
  std::string cmp_model, cmp_out, cmp_scenarios = "tt,rsc,tgr,ss,ramp";
  int cmp_trials = 20;
  std::uint64_t cmp_seed = 1;
  auto* cmp = app.add_subcommand("compare", "Dom vs PID table over scenarios");
  cmp->add_option("--model", cmp_model, "model file for dom, or 'oracle'");
  cmp->add_option("--scenarios", cmp_scenarios, "comma-separated list");
  cmp->add_option("--trials", cmp_trials, "trials per scenario");
  cmp->add_option("--seed", cmp_seed, "seed of the first trial");
  cmp->add_option("--out", cmp_out, "table CSV")->required();

  // tune-pid
  std::string tune_out;
  int tune_trials = 2;
  auto* tune = app.add_subcommand("tune-pid",
                                  "grid-search PID gains on trajectory tracking");
  tune->add_option("--trials", tune_trials, "tracking trials per candidate");
  tune->add_option("--out", tune_out, "best gains as an INI [pid] section");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    ab::RunConfig cfg = load(common);

    if (*gen) {
      if (duration) cfg.dataset.duration = *duration;
      if (dt_sensor) cfg.dataset.dt_sensor = *dt_sensor;
      if (noise) cfg.dataset.rate_noise_std = *noise;
      if (data_seed) cfg.dataset.seed = *data_seed;
      cfg.finalize();
      const auto data = ab::generate_dataset(cfg.physical, cfg.limits, cfg.dataset);
      std::ofstream out = open_out(data_out);
      ab::write_dataset(out, data,
                        stamp("gen-data", cfg,
                              "seed=" + std::to_string(cfg.dataset.seed)));
      std::cerr << "wrote " << data.size() << " samples to " << data_out << "\n";
    } else if (*tr) {
      if (epochs) cfg.training.epochs = *epochs;
      if (lr) cfg.training.learning_rate = *lr;
      if (batch) cfg.training.batch_size = *batch;
      if (train_seed) cfg.training.seed = *train_seed;
      cfg.finalize();
      std::ifstream in(train_data);
      if (!in) throw ab::ArgumentError("cannot read '" + train_data + "'");
      const auto data = ab::read_dataset(in);
      const ab::TrainResult r = ab::train(data, cfg.training, cfg.training.seed);
      ab::save_model(r.model, model_out);
      if (history_out.empty()) history_out = model_out + ".history.csv";
      std::ofstream h = open_out(history_out);
      ab::write_history(h, r.history,
                        stamp("train", cfg,
                              "seed=" + std::to_string(cfg.training.seed)));
      std::cout << "best_epoch " << r.best_epoch << "\nval_mse "
                << ab::format_double(r.best_val_mse) << "\n";
    } else if (*ev) {
      const ab::PhliModel m = ab::load_model(eval_model);
      std::ifstream in(eval_data);
      if (!in) throw ab::ArgumentError("cannot read '" + eval_data + "'");
      std::vector<ab::Sample> data = ab::read_dataset(in);
      if (eval_split_seed) {
        std::vector<std::size_t> train_idx, val_idx;
        ab::split_indices(data.size(), cfg.training.val_fraction,
                          *eval_split_seed, &train_idx, &val_idx);
        std::vector<ab::Sample> val;
        for (std::size_t i : val_idx) val.push_back(data[i]);
        data = std::move(val);
      }
      const auto rms = ab::rms_error(m, data);
      std::ostringstream os;
      os << stamp("eval-model", cfg, "") << "\n"
         << "normalized_mse,rms_roll_acc,rms_pitch_acc,rms_yaw_acc";
      if (!common.config_path.empty()) {
        os << ",oracle_rms_roll_acc,oracle_rms_pitch_acc";
      }
      os << "\n" << ab::format_double(ab::normalized_mse(m, data)) << ","
         << ab::format_double(rms[0]) << "," << ab::format_double(rms[1])
         << "," << ab::format_double(rms[2]);
      if (!common.config_path.empty()) {
        // Against the noise-free analytic accelerations instead of labels.
        double se_roll = 0.0, se_pitch = 0.0;
        for (const ab::Sample& s : data) {
          const ab::AngularAccel truth =
              ab::total_accel(s.state, s.action, cfg.physical);
          const ab::AngularAccel pred = ab::g_phi_forward(m, s.state, s.action);
          se_roll += (pred.roll_acc - truth.roll_acc) * (pred.roll_acc - truth.roll_acc);
          se_pitch += (pred.pitch_acc - truth.pitch_acc) * (pred.pitch_acc - truth.pitch_acc);
        }
        const double n = data.empty() ? 1.0 : static_cast<double>(data.size());
        os << "," << ab::format_double(std::sqrt(se_roll / n)) << ","
           << ab::format_double(std::sqrt(se_pitch / n));
      }
      os << "\n";
      if (eval_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream out = open_out(eval_out);
        out << os.str();
      }
    } else if (*pl) {
      if (plan_seed) cfg.planner.seed = *plan_seed;
      cfg.finalize();
      const ab::VehicleState s0 = parse_state(plan_state, "--state");
      const ab::GoalState g(parse_state(plan_goal, "--goal"));
      const auto model = planner_model(cfg, plan_model);
      ab::Rng env_rng(cfg.planner.seed ^ 0x5bd1e995ULL);
      ab::Rng plan_rng(cfg.planner.seed);
      const ab::EnvironmentStep env = [&](const ab::VehicleState& s,
                                          const ab::Action& a, double dt) {
        return ab::step(s, a, dt, cfg.physical, cfg.limits, &env_rng);
      };
      const ab::ControlLoopResult r = ab::control_loop(
          s0, g, plan_time, *model, cfg.planner, cfg.cost, env, plan_rng);
      const std::string line = stamp("plan", cfg, "");
      std::ofstream out = open_out(plan_out);
      ab::write_trajectory(out, r.executed, 1.0 / cfg.planner.replan_hz, line);
      if (plan_cycles.empty()) plan_cycles = plan_out + ".cycles.csv";
      std::ofstream c = open_out(plan_cycles);
      ab::write_cycles(c, r.cycles, line);
      const ab::StateVector res =
          ab::goal_residual(r.executed.states.back(), g);
      std::cerr << "terminal residual roll " << res[ab::kRoll] << " pitch "
                << res[ab::kPitch] << "\n";
    } else if (*sc) {
      cfg.scenario.kind = ab::parse_scenario(sc_name);
      cfg.finalize();
      auto controller = make_controller(sc_controller, cfg, sc_model);
      const auto seeds = seed_list(sc_seed, sc_trials);
      const ab::Metrics m = ab::run_scenario(*controller, cfg.scenario, seeds);
      const std::string line =
          stamp("scenario", cfg,
                sc_name + " " + sc_controller + " trials=" +
                    std::to_string(sc_trials) + " seed=" + std::to_string(sc_seed));
      const std::filesystem::path dir(sc_out);
      std::filesystem::create_directories(dir);
      std::ofstream out = open_out((dir / "metrics.csv").string());
      ab::write_metrics(out, m, line);
      for (const ab::TrialResult& t : m.per_trial) {
        std::ofstream log = open_out(
            (dir / (sc_name + "_" + sc_controller + "_" +
                    std::to_string(t.seed) + ".csv"))
                .string());
        ab::write_episode(log, t.log, line);
      }
      std::cerr << sc_name << " " << sc_controller << ": " << m.successes << "/"
                << m.trials << " successful\n";
    } else if (*cmp) {
      cfg.finalize();
      std::vector<ab::ScenarioSpec> specs;
      std::stringstream ss(cmp_scenarios);
      std::string name;
      while (std::getline(ss, name, ',')) {
        ab::ScenarioSpec spec = cfg.scenario;
        spec.kind = ab::parse_scenario(name);
        specs.push_back(spec);
      }
      if (specs.empty()) throw ab::ArgumentError("--scenarios is empty");
      auto dom = make_controller("dom", cfg, cmp_model);
      auto pid = make_controller("pid", cfg, cmp_model);
      std::vector<ab::Controller*> controllers{dom.get(), pid.get()};
      const auto seeds = seed_list(cmp_seed, cmp_trials);
      const ab::ComparisonTable table = ab::compare(specs, controllers, seeds);
      std::ofstream out = open_out(cmp_out);
      ab::write_comparison(out, table,
                           stamp("compare", cfg,
                                 cmp_scenarios + " trials=" +
                                     std::to_string(cmp_trials) +
                                     " seed=" + std::to_string(cmp_seed)));
    } else if (*tune) {
      cfg.finalize();
      const auto seeds = seed_list(1, tune_trials);
      const ab::PidTuneResult r = ab::tune_pid(cfg.scenario, ab::PidGrid{}, seeds);
      std::ostringstream os;
      os << "# tune-pid: " << r.evaluated << " candidates, best TT error "
         << ab::format_double(r.best_error) << "\n[pid]\n"
         << "pitch_kp = " << r.best.pitch.kp << "\n"
         << "pitch_kd = " << r.best.pitch.kd << "\n"
         << "roll_kp = " << r.best.roll.kp << "\n"
         << "roll_kd = " << r.best.roll.kd << "\n";
      if (tune_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream out = open_out(tune_out);
        out << os.str();
      }
    }
  } catch (const ab::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ab::ModelFormatError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ab::TrainingConfigError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
