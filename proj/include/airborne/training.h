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

#ifndef AIRBORNE_TRAINING_H_
#define AIRBORNE_TRAINING_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "airborne/phli.h"
#include "airborne/physics.h"
#include "airborne/types.h"

namespace airborne {

// One supervised example: state, applied action, angular acceleration.
struct Sample {
  VehicleState state;
  Action action;
  AngularAccel label;
};

using RateTriple = std::array<double, 3>;  // roll, pitch, yaw rates

// Differentiates sampled angular rates. Central differences at interior
// points, forward difference at the first point and backward at the last.
// A breakpoint b marks a command change at sample b: the rate series has a
// kink there, so sample b uses the forward difference instead of a stencil
// that straddles it. Throws ArgumentError for fewer than 3 samples.
std::vector<AngularAccel> derive_accel_labels(
    std::span<const RateTriple> rates, double dt_sensor,
    std::span<const std::size_t> breakpoints = {});

// Piecewise-constant random excitation: segment lengths U[0.1, 0.5] s,
// values uniform over the rate limits, 10% of segments with one rate pinned
// to an extreme. Returns round(duration / dt_sensor) actions.
std::vector<Action> excite_policy(double duration, double dt_sensor,
                                  const ActuationLimits& limits,
                                  std::uint64_t seed);

struct DatasetOptions {
  double duration = 3600.0;      // s
  double dt_sensor = 0.02;       // s
  double rate_noise_std = 0.01;  // rad/s, added to the logged rates
  double episode_length = 10.0;  // s between randomized restarts
  std::uint64_t seed = 0;
};

// Oracle rollouts under excite_policy from randomized initial states, with
// labels differentiated from (optionally noisy) logged rates. Produces
// round(duration / dt_sensor) samples.
std::vector<Sample> generate_dataset(const PhysicalParams& p,
                                     const ActuationLimits& limits,
                                     const DatasetOptions& options);

enum class Optimizer { kAdam, kSgdMomentum };

struct TrainConfig {
  int epochs = 100;
  int batch_size = 256;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;  // split and shuffling
  double val_fraction = 0.15;
  Optimizer optimizer = Optimizer::kAdam;
  double momentum = 0.9;  // SGD only
  std::array<int, kLayerCount + 1> layer_dims{kFeatureDim, 64, 64, 64,
                                              kTargetDim};
  double model_dt = 0.2;  // integration interval stored in the model
  int workers = 1;

  void validate() const;
};

struct EpochLoss {
  int epoch = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct TrainResult {
  PhliModel model;  // lowest validation loss checkpoint
  std::vector<EpochLoss> history;
  int best_epoch = 0;
  double best_val_mse = 0.0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
};

// Deterministic shuffled split; the first round(n * val_fraction) shuffled
// indices (at least 1, at most n - 1) form the validation set.
void split_indices(std::size_t n, double val_fraction, std::uint64_t seed,
                   std::vector<std::size_t>* train,
                   std::vector<std::size_t>* val);

// Fits the acceleration predictor by minimizing the mean squared error on
// normalized targets. Normalization statistics come from the training split.
// Throws ArgumentError for fewer than 10 samples and TrainingConfigError when
// an input feature has zero variance.
TrainResult train(std::span<const Sample> data, const TrainConfig& cfg,
                  std::uint64_t model_init_seed);

// Mean squared error on normalized targets over the given samples.
double normalized_mse(const PhliModel& m, std::span<const Sample> data);

// Per-axis RMS error of g_phi against the labels.
std::array<double, kTargetDim> rms_error(const PhliModel& m,
                                         std::span<const Sample> data);

// Single-sample loss mean((y - t)^2) over the normalized outputs, with its
// gradient with respect to every parameter in flat order (per layer: weights,
// then biases).
double sample_loss_and_gradient(const PhliModel& m, const Sample& sample,
                                std::vector<double>* gradient);

// Largest relative error between backprop gradients and central finite
// differences over every parameter. Relative error uses
// max(|analytic|, |numeric|, 1e-6) as denominator.
double gradient_check(const PhliModel& m, const Sample& sample,
                      double epsilon);

}  // namespace airborne

#endif  // AIRBORNE_TRAINING_H_
