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

#ifndef AIRBORNE_PHLI_H_
#define AIRBORNE_PHLI_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "airborne/dynamics.h"
#include "airborne/types.h"

namespace airborne {

inline constexpr int kFeatureDim = kStateDim + kActionDim;  // 10
inline constexpr int kTargetDim = 3;                          // roll, pitch, yaw
inline constexpr int kLayerCount = 4;

using FeatureVector = std::array<double, kFeatureDim>;

// (s, a) flattened in canonical order: 8 state entries, rpm_rate, steer_rate.
FeatureVector make_features(const VehicleState& s, const Action& a);

// One affine layer y = x W + b. weights is in x out, row-major.
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> biases;
};

struct Normalization {
  std::vector<double> mean;
  std::vector<double> std;
};

// Learned acceleration predictor (a 4-layer perceptron with tanh hidden
// units) together with feature/target normalization and the integration
// interval of the analytic half of the model.
struct PhliModel {
  std::array<int, kLayerCount + 1> layer_dims{kFeatureDim, 64, 64, 64,
                                              kTargetDim};
  std::vector<DenseLayer> layers;
  Normalization input_norm;
  Normalization output_norm;
  double dt = 0.2;

  // Throws ModelFormatError on inconsistent shapes, non-positive std or dt.
  void validate() const;

  // All parameters zero, identity normalization (mean 0, std 1).
  static PhliModel zeros(std::array<int, kLayerCount + 1> dims, double dt);
  // Glorot-uniform weights, zero biases, identity normalization.
  static PhliModel random(std::array<int, kLayerCount + 1> dims, double dt,
                          std::uint64_t seed);

  std::size_t parameter_count() const;
};

// Forward pass on an already normalized feature vector; writes kTargetDim
// normalized outputs. When hidden is non-null it receives the post-tanh
// activations of the three hidden layers, concatenated.
void mlp_forward(const PhliModel& m, const double* x_norm, double* y_norm,
                 std::vector<double>* hidden = nullptr);

// Row-major batch version: x_norm is n x input width, y_norm n x kTargetDim.
void mlp_forward_batch(const PhliModel& m, const double* x_norm, std::size_t n,
                       double* y_norm);

// Learned angular accelerations in physical units.
AngularAccel g_phi_forward(const PhliModel& m, const VehicleState& s,
                           const Action& a);

// Integrates the supplied accelerations; same arithmetic as the oracle step.
VehicleState h_xi_step(const AngularAccel& acc, const VehicleState& s,
                       const Action& a, double dt,
                       const ActuationLimits& limits);

// h_xi_step(g_phi_forward(m, s', a'), s', a', m.dt) with s', a' the clamped
// state and action.
VehicleState phli_step(const PhliModel& m, const VehicleState& s,
                       const Action& a, const ActuationLimits& limits);

// phli_step over equally sized spans, one batched network evaluation.
void phli_step_batch(const PhliModel& m, std::span<const VehicleState> s,
                     std::span<const Action> a, const ActuationLimits& limits,
                     std::span<VehicleState> out);

// Plain-text model format, see README.
void write_model(const PhliModel& m, std::ostream& out);
PhliModel read_model(std::istream& in);
void save_model(const PhliModel& m, const std::string& path);
PhliModel load_model(const std::string& path);

class PhliForwardModel : public ForwardModel {
 public:
  PhliForwardModel(std::shared_ptr<const PhliModel> model,
                   const ActuationLimits& limits);

  VehicleState step(const VehicleState& s, const Action& a) const override;
  void step_batch(std::span<const VehicleState> s, std::span<const Action> a,
                  std::span<VehicleState> out) const override;
  double dt() const override { return model_->dt; }
  const ActuationLimits& limits() const override { return limits_; }
  const PhliModel& model() const { return *model_; }

 private:
  std::shared_ptr<const PhliModel> model_;
  ActuationLimits limits_;
};

}  // namespace airborne

#endif  // AIRBORNE_PHLI_H_
