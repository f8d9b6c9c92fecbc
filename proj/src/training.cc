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

#include "airborne/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Core>

#include "airborne/errors.h"
#include "airborne/parallel.h"
#include "tanh_kernel.h"

namespace airborne {

std::vector<AngularAccel> derive_accel_labels(
    std::span<const RateTriple> rates, double dt_sensor,
    std::span<const std::size_t> breakpoints) {
  const std::size_t n = rates.size();
  if (n < 3) {
    throw ArgumentError("derive_accel_labels: need at least 3 samples, got " +
                        std::to_string(n));
  }
  if (!(dt_sensor > 0.0)) {
    throw ConfigError("derive_accel_labels: dt_sensor must be > 0");
  }
  std::vector<char> is_break(n, 0);
  for (std::size_t b : breakpoints) {
    if (b < n) is_break[b] = 1;
  }

  std::vector<AngularAccel> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    RateTriple d{};
    if (k == n - 1) {
      for (int i = 0; i < 3; ++i) d[i] = (rates[k][i] - rates[k - 1][i]) / dt_sensor;
    } else if (k == 0 || is_break[k]) {
      for (int i = 0; i < 3; ++i) d[i] = (rates[k + 1][i] - rates[k][i]) / dt_sensor;
    } else {
      for (int i = 0; i < 3; ++i) {
        d[i] = (rates[k + 1][i] - rates[k - 1][i]) / (2.0 * dt_sensor);
      }
    }
    out[k] = {d[0], d[1], d[2]};
  }
  return out;
}

std::vector<Action> excite_policy(double duration, double dt_sensor,
                                  const ActuationLimits& limits,
                                  std::uint64_t seed) {
  if (!(duration > 0.0)) throw ArgumentError("excite_policy: duration must be > 0");
  if (!(dt_sensor > 0.0)) throw ConfigError("excite_policy: dt_sensor must be > 0");
  const auto count = static_cast<std::size_t>(std::llround(duration / dt_sensor));

  Rng rng(seed);
  std::uniform_real_distribution<double> seg_len(0.1, 0.5);
  std::uniform_real_distribution<double> rpm_rate(limits.rpm_rate_min,
                                                  limits.rpm_rate_max);
  std::uniform_real_distribution<double> steer_rate(limits.steer_rate_min,
                                                    limits.steer_rate_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Action> actions;
  actions.reserve(count);
  while (actions.size() < count) {
    const auto steps = std::max<long long>(1, std::llround(seg_len(rng) / dt_sensor));
    Action a{rpm_rate(rng), steer_rate(rng)};
    if (unit(rng) < 0.1) {
      const bool pin_rpm = unit(rng) < 0.5;
      const bool high = unit(rng) < 0.5;
      if (pin_rpm) {
        a.rpm_rate = high ? limits.rpm_rate_max : limits.rpm_rate_min;
      } else {
        a.steer_rate = high ? limits.steer_rate_max : limits.steer_rate_min;
      }
    }
    for (long long i = 0; i < steps && actions.size() < count; ++i) {
      actions.push_back(a);
    }
  }
  return actions;
}

std::vector<Sample> generate_dataset(const PhysicalParams& p,
                                     const ActuationLimits& limits,
                                     const DatasetOptions& options) {
  p.validate();
  limits.validate();
  if (!(options.dt_sensor > 0.0)) {
    throw ConfigError("generate_dataset: dt_sensor must be > 0");
  }
  if (!(options.rate_noise_std >= 0.0)) {
    throw ConfigError("generate_dataset: rate_noise_std must be >= 0");
  }
  if (!(options.episode_length > 0.0)) {
    throw ConfigError("generate_dataset: episode_length must be > 0");
  }
  const auto total =
      static_cast<std::size_t>(std::llround(options.duration / options.dt_sensor));
  if (!(options.duration > 0.0) || total < 3) {
    throw ArgumentError("generate_dataset: duration / dt_sensor must be >= 3");
  }
  const std::size_t per_episode = std::max<std::size_t>(
      2, static_cast<std::size_t>(
             std::llround(options.episode_length / options.dt_sensor)));
  const std::size_t episodes = (total + per_episode - 1) / per_episode;

  Rng rng(options.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> body_rate(-2.0, 2.0);
  std::uniform_real_distribution<double> yaw_rate(-0.5, 0.5);
  std::uniform_real_distribution<double> rpm(limits.rpm_min, limits.rpm_max);
  std::uniform_real_distribution<double> steer(limits.steer_min, limits.steer_max);
  std::normal_distribution<double> rate_noise(0.0, 1.0);

  std::vector<Sample> data;
  data.reserve(total);
  for (std::size_t e = 0; e < episodes; ++e) {
    // Spread the remainder so every episode has at least 2 steps.
    const std::size_t steps = total * (e + 1) / episodes - total * e / episodes;
    VehicleState s0;
    s0.roll = angle(rng);
    s0.roll_rate = body_rate(rng);
    s0.pitch = angle(rng);
    s0.pitch_rate = body_rate(rng);
    s0.yaw = angle(rng);
    s0.yaw_rate = yaw_rate(rng);
    s0.rpm = rpm(rng);
    s0.steer = steer(rng);
    const std::uint64_t policy_seed = rng();
    const std::uint64_t noise_seed = rng();

    const std::vector<Action> commands = excite_policy(
        static_cast<double>(steps) * options.dt_sensor, options.dt_sensor,
        limits, policy_seed);
    const Trajectory traj = simulate(s0, std::span(commands).first(steps),
                                     options.dt_sensor, p, limits, noise_seed);

    std::vector<RateTriple> rates(traj.states.size());
    for (std::size_t k = 0; k < rates.size(); ++k) {
      const VehicleState& s = traj.states[k];
      rates[k] = {s.roll_rate, s.pitch_rate, s.yaw_rate};
      if (options.rate_noise_std > 0.0) {
        for (double& r : rates[k]) r += options.rate_noise_std * rate_noise(rng);
      }
    }
    std::vector<std::size_t> breaks;
    for (std::size_t k = 1; k < traj.actions.size(); ++k) {
      if (!(traj.actions[k] == traj.actions[k - 1])) breaks.push_back(k);
    }
    const std::vector<AngularAccel> labels =
        derive_accel_labels(rates, options.dt_sensor, breaks);
    for (std::size_t k = 0; k < traj.actions.size(); ++k) {
      data.push_back({traj.states[k], traj.actions[k], labels[k]});
    }
  }
  return data;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw TrainingConfigError("train: epochs must be >= 1");
  if (batch_size < 1) throw TrainingConfigError("train: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw TrainingConfigError("train: learning_rate must be > 0");
  }
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw TrainingConfigError("train: val_fraction must be in (0, 1)");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw TrainingConfigError("train: momentum must be in [0, 1)");
  }
  if (!(model_dt > 0.0)) throw TrainingConfigError("train: model_dt must be > 0");
  if (layer_dims[0] != kFeatureDim || layer_dims[kLayerCount] != kTargetDim) {
    throw TrainingConfigError("train: layer dims must start with 10 and end with 3");
  }
  for (int d : layer_dims) {
    if (d < 1) throw TrainingConfigError("train: layer widths must be >= 1");
  }
}

void split_indices(std::size_t n, double val_fraction, std::uint64_t seed,
                   std::vector<std::size_t>* train,
                   std::vector<std::size_t>* val) {
  if (n < 2) throw ArgumentError("split_indices: need at least 2 samples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * val_fraction));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  val->assign(order.begin(), order.begin() + n_val);
  train->assign(order.begin() + n_val, order.end());
}

namespace {

using Targets = std::array<double, kTargetDim>;

Targets label_array(const AngularAccel& a) {
  return {a.roll_acc, a.pitch_acc, a.yaw_acc};
}

void normalize_input(const PhliModel& m, const FeatureVector& f, double* x) {
  for (int i = 0; i < kFeatureDim; ++i) {
    x[i] = (f[i] - m.input_norm.mean[i]) / m.input_norm.std[i];
  }
}

void normalize_target(const PhliModel& m, const Targets& t, double* y) {
  for (int i = 0; i < kTargetDim; ++i) {
    y[i] = (t[i] - m.output_norm.mean[i]) / m.output_norm.std[i];
  }
}

// Layout of the flat parameter/gradient vector.
struct ParamLayout {
  std::vector<std::size_t> weight_offset;
  std::vector<std::size_t> bias_offset;
  std::size_t size = 0;

  explicit ParamLayout(const PhliModel& m) {
    for (const DenseLayer& layer : m.layers) {
      weight_offset.push_back(size);
      size += layer.weights.size();
      bias_offset.push_back(size);
      size += layer.biases.size();
    }
  }
};

double& param_at(PhliModel& m, const ParamLayout& layout, std::size_t idx) {
  for (int l = kLayerCount - 1; l >= 0; --l) {
    if (idx >= layout.bias_offset[l]) {
      return m.layers[l].biases[idx - layout.bias_offset[l]];
    }
    if (idx >= layout.weight_offset[l]) {
      return m.layers[l].weights[idx - layout.weight_offset[l]];
    }
  }
  return m.layers[0].weights[idx];
}

// Adds scale * d(loss)/d(theta) for one normalized example to grad and
// returns the loss mean((y - t)^2).
double backprop(const PhliModel& m, const ParamLayout& layout, const double* x,
                const double* t, double scale, double* grad,
                std::vector<double>& hidden, std::vector<double>& delta,
                std::vector<double>& delta_prev) {
  std::array<double, kTargetDim> y{};
  mlp_forward(m, x, y.data(), &hidden);

  double loss = 0.0;
  delta.assign(kTargetDim, 0.0);
  for (int j = 0; j < kTargetDim; ++j) {
    const double r = y[j] - t[j];
    loss += r * r;
    delta[j] = 2.0 * r / kTargetDim;
  }
  loss /= kTargetDim;

  // hidden holds a1 | a2 | a3 in order.
  std::vector<std::size_t> hidden_offset(kLayerCount, 0);
  for (int l = 1; l < kLayerCount; ++l) {
    hidden_offset[l] = hidden_offset[l - 1] +
                       (l >= 2 ? static_cast<std::size_t>(m.layer_dims[l - 1]) : 0);
  }
  for (int l = kLayerCount - 1; l >= 0; --l) {
    const DenseLayer& layer = m.layers[l];
    const double* input = l == 0 ? x : hidden.data() + hidden_offset[l];
    double* gw = grad + layout.weight_offset[l];
    double* gb = grad + layout.bias_offset[l];
    for (int j = 0; j < layer.out; ++j) gb[j] += scale * delta[j];
    for (int k = 0; k < layer.in; ++k) {
      const double sx = scale * input[k];
      double* row = gw + static_cast<std::size_t>(k) * layer.out;
      for (int j = 0; j < layer.out; ++j) row[j] += sx * delta[j];
    }
    if (l == 0) break;
    delta_prev.assign(layer.in, 0.0);
    for (int k = 0; k < layer.in; ++k) {
      const double* wrow = layer.weights.data() + static_cast<std::size_t>(k) * layer.out;
      double acc = 0.0;
      for (int j = 0; j < layer.out; ++j) acc += wrow[j] * delta[j];
      const double a = input[k];
      delta_prev[k] = acc * (1.0 - a * a);
    }
    delta.swap(delta_prev);
  }
  return loss;
}

struct NormalizedSet {
  std::vector<double> x;  // n x kFeatureDim
  std::vector<double> y;  // n x kTargetDim
  std::size_t size = 0;
};

NormalizedSet normalize_set(const PhliModel& m, std::span<const Sample> data,
                            std::span<const std::size_t> indices) {
  NormalizedSet set;
  set.size = indices.size();
  set.x.resize(set.size * kFeatureDim);
  set.y.resize(set.size * kTargetDim);
  for (std::size_t i = 0; i < set.size; ++i) {
    const Sample& s = data[indices[i]];
    normalize_input(m, make_features(s.state, s.action), &set.x[i * kFeatureDim]);
    normalize_target(m, label_array(s.label), &set.y[i * kTargetDim]);
  }
  return set;
}

double set_mse(const PhliModel& m, const NormalizedSet& set) {
  double total = 0.0;
  std::array<double, kTargetDim> y{};
  for (std::size_t i = 0; i < set.size; ++i) {
    mlp_forward(m, &set.x[i * kFeatureDim], y.data());
    for (int j = 0; j < kTargetDim; ++j) {
      const double r = y[j] - set.y[i * kTargetDim + j];
      total += r * r;
    }
  }
  return total / (static_cast<double>(set.size) * kTargetDim);
}

// Fixed chunking keeps the gradient sum independent of the worker count.
constexpr std::size_t kChunk = 32;

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;

// Eigen's kernels round differently depending on operand alignment, so
// weights and gradients go through owned (aligned) copies rather than maps
// over std::vector storage. Keeps training bit-reproducible.
struct ChunkScratch {
  std::array<RowMat, kLayerCount + 1> acts;  // input, hidden..., output
  std::array<RowMat, kLayerCount> w, gw;
  std::array<Eigen::RowVectorXd, kLayerCount> b, gb;
  RowMat target, delta, delta_prev;
};

// Batched backprop over count samples of a chunk. Same quantity as summing
// backprop() over them, evaluated with matrix products.
double chunk_backprop(const PhliModel& m, const ParamLayout& layout,
                      const NormalizedSet& set, const std::size_t* rows,
                      std::size_t count, double scale, double* grad,
                      ChunkScratch& s) {
  const auto n = static_cast<Eigen::Index>(count);
  s.acts[0].resize(n, kFeatureDim);
  s.target.resize(n, kTargetDim);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t i = rows[r];
    s.acts[0].row(r) = ConstMap(&set.x[i * kFeatureDim], 1, kFeatureDim);
    s.target.row(r) = ConstMap(&set.y[i * kTargetDim], 1, kTargetDim);
  }
  for (int l = 0; l < kLayerCount; ++l) {
    const DenseLayer& layer = m.layers[l];
    s.w[l] = ConstMap(layer.weights.data(), layer.in, layer.out);
    s.b[l] = Eigen::Map<const Eigen::RowVectorXd>(layer.biases.data(), layer.out);
    RowMat& z = s.acts[l + 1];
    z.noalias() = s.acts[l] * s.w[l];
    z.rowwise() += s.b[l];
    if (l + 1 < kLayerCount) {
      detail::tanh_inplace(z.data(), static_cast<long>(z.size()));
    }
  }
  s.delta = s.acts[kLayerCount] - s.target;
  const double loss = s.delta.squaredNorm() / kTargetDim;
  s.delta *= 2.0 / kTargetDim;
  for (int l = kLayerCount - 1; l >= 0; --l) {
    s.gw[l].noalias() = scale * (s.acts[l].transpose() * s.delta);
    s.gb[l].noalias() = scale * s.delta.colwise().sum();
    double* gw = grad + layout.weight_offset[l];
    double* gb = grad + layout.bias_offset[l];
    for (Eigen::Index i = 0; i < s.gw[l].size(); ++i) gw[i] += s.gw[l].data()[i];
    for (Eigen::Index i = 0; i < s.gb[l].size(); ++i) gb[i] += s.gb[l].data()[i];
    if (l == 0) break;
    s.delta_prev.noalias() = s.delta * s.w[l].transpose();
    s.delta = s.delta_prev.cwiseProduct(
        (1.0 - s.acts[l].array().square()).matrix());
  }
  return loss;
}

}  // namespace

TrainResult train(std::span<const Sample> data, const TrainConfig& cfg,
                  std::uint64_t model_init_seed) {
  cfg.validate();
  if (data.size() < 10) {
    throw ArgumentError("train: need at least 10 samples, got " +
                        std::to_string(data.size()));
  }

  TrainResult result;
  split_indices(data.size(), cfg.val_fraction, cfg.seed, &result.train_indices,
                &result.val_indices);

  PhliModel model = PhliModel::random(cfg.layer_dims, cfg.model_dt, model_init_seed);

  // Statistics from the training split only.
  const double n_train = static_cast<double>(result.train_indices.size());
  std::vector<double> in_mean(kFeatureDim, 0.0), in_var(kFeatureDim, 0.0);
  std::vector<double> out_mean(kTargetDim, 0.0), out_var(kTargetDim, 0.0);
  for (std::size_t idx : result.train_indices) {
    const FeatureVector f = make_features(data[idx].state, data[idx].action);
    const Targets t = label_array(data[idx].label);
    for (int i = 0; i < kFeatureDim; ++i) in_mean[i] += f[i];
    for (int i = 0; i < kTargetDim; ++i) out_mean[i] += t[i];
  }
  for (double& v : in_mean) v /= n_train;
  for (double& v : out_mean) v /= n_train;
  for (std::size_t idx : result.train_indices) {
    const FeatureVector f = make_features(data[idx].state, data[idx].action);
    const Targets t = label_array(data[idx].label);
    for (int i = 0; i < kFeatureDim; ++i) in_var[i] += (f[i] - in_mean[i]) * (f[i] - in_mean[i]);
    for (int i = 0; i < kTargetDim; ++i) out_var[i] += (t[i] - out_mean[i]) * (t[i] - out_mean[i]);
  }
  static constexpr std::array<std::string_view, kFeatureDim> kFeatureNames = {
      "roll", "roll_rate", "pitch", "pitch_rate", "yaw", "yaw_rate",
      "rpm",  "steer",     "rpm_rate_cmd", "steer_rate_cmd"};
  for (int i = 0; i < kFeatureDim; ++i) {
    const double sd = std::sqrt(in_var[i] / n_train);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(in_mean[i])))) {
      throw TrainingConfigError("train: feature '" + std::string(kFeatureNames[i]) +
                                "' has zero variance in the training split");
    }
    model.input_norm.mean[i] = in_mean[i];
    model.input_norm.std[i] = sd;
  }
  for (int i = 0; i < kTargetDim; ++i) {
    const double sd = std::sqrt(out_var[i] / n_train);
    model.output_norm.mean[i] = out_mean[i];
    // A constant target keeps unit scale.
    model.output_norm.std[i] = sd > 1e-12 ? sd : 1.0;
  }
  model.validate();

  const NormalizedSet train_set = normalize_set(model, data, result.train_indices);
  const NormalizedSet val_set = normalize_set(model, data, result.val_indices);

  const ParamLayout layout(model);
  std::vector<double> params(layout.size), grad(layout.size);
  std::vector<double> m1(layout.size, 0.0), m2(layout.size, 0.0);
  for (std::size_t i = 0; i < layout.size; ++i) params[i] = param_at(model, layout, i);
  auto load_params = [&](PhliModel& target) {
    for (std::size_t i = 0; i < layout.size; ++i) param_at(target, layout, i) = params[i];
  };

  const int workers = resolve_workers(cfg.workers);
  const std::size_t max_chunks = (static_cast<std::size_t>(cfg.batch_size) + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> chunk_grad(max_chunks, std::vector<double>(layout.size));
  std::vector<double> chunk_loss(max_chunks);

  Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train_set.size);
  std::iota(order.begin(), order.end(), 0);

  PhliModel best = model;
  result.best_val_mse = set_mse(model, val_set);
  result.best_epoch = 0;
  long long adam_step = 0;
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::size_t batch = end - start;
      const std::size_t chunks = (batch + kChunk - 1) / kChunk;
      const double scale = 1.0 / static_cast<double>(batch);
      parallel_for(chunks, workers, [&](std::size_t c) {
        thread_local ChunkScratch scratch;
        std::vector<double>& g = chunk_grad[c];
        std::fill(g.begin(), g.end(), 0.0);
        const std::size_t c_begin = c * kChunk;
        const std::size_t c_end = std::min(batch, c_begin + kChunk);
        chunk_loss[c] = chunk_backprop(model, layout, train_set,
                                       &order[start + c_begin], c_end - c_begin,
                                       scale, g.data(), scratch);
      });
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t i = 0; i < layout.size; ++i) grad[i] += chunk_grad[c][i];
        epoch_loss += chunk_loss[c];
      }

      if (cfg.optimizer == Optimizer::kAdam) {
        ++adam_step;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(adam_step));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(adam_step));
        for (std::size_t i = 0; i < layout.size; ++i) {
          m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
          m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
          params[i] -= cfg.learning_rate * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + adam_eps);
        }
      } else {
        for (std::size_t i = 0; i < layout.size; ++i) {
          m1[i] = cfg.momentum * m1[i] + grad[i];
          params[i] -= cfg.learning_rate * m1[i];
        }
      }
      load_params(model);
    }

    EpochLoss rec;
    rec.epoch = epoch;
    rec.train_mse = epoch_loss / static_cast<double>(train_set.size);
    rec.val_mse = set_mse(model, val_set);
    result.history.push_back(rec);
    if (rec.val_mse < result.best_val_mse) {
      result.best_val_mse = rec.val_mse;
      result.best_epoch = epoch;
      best = model;
    }
  }
  result.model = std::move(best);
  return result;
}

double normalized_mse(const PhliModel& m, std::span<const Sample> data) {
  if (data.empty()) return 0.0;
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return set_mse(m, normalize_set(m, data, all));
}

std::array<double, kTargetDim> rms_error(const PhliModel& m,
                                         std::span<const Sample> data) {
  std::array<double, kTargetDim> sum{};
  for (const Sample& s : data) {
    const AngularAccel p = g_phi_forward(m, s.state, s.action);
    const Targets pred = label_array(p);
    const Targets t = label_array(s.label);
    for (int i = 0; i < kTargetDim; ++i) sum[i] += (pred[i] - t[i]) * (pred[i] - t[i]);
  }
  for (double& v : sum) v = data.empty() ? 0.0 : std::sqrt(v / data.size());
  return sum;
}

double sample_loss_and_gradient(const PhliModel& m, const Sample& sample,
                                std::vector<double>* gradient) {
  const ParamLayout layout(m);
  std::array<double, kFeatureDim> x{};
  std::array<double, kTargetDim> t{};
  normalize_input(m, make_features(sample.state, sample.action), x.data());
  normalize_target(m, label_array(sample.label), t.data());
  gradient->assign(layout.size, 0.0);
  std::vector<double> hidden, delta, delta_prev;
  return backprop(m, layout, x.data(), t.data(), 1.0, gradient->data(), hidden,
                  delta, delta_prev);
}

double gradient_check(const PhliModel& m, const Sample& sample,
                      double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw ArgumentError("gradient_check: epsilon must be in [1e-7, 1e-3]");
  }
  std::vector<double> analytic;
  sample_loss_and_gradient(m, sample, &analytic);

  PhliModel probe = m;
  const ParamLayout layout(probe);
  std::vector<double> scratch;
  double worst = 0.0;
  for (std::size_t i = 0; i < layout.size; ++i) {
    double& p = param_at(probe, layout, i);
    const double saved = p;
    p = saved + epsilon;
    const double up = sample_loss_and_gradient(probe, sample, &scratch);
    p = saved - epsilon;
    const double down = sample_loss_and_gradient(probe, sample, &scratch);
    p = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double denom =
        std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace airborne
