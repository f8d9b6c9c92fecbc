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

#include "airborne/phli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Core>

#include "airborne/errors.h"
#include "tanh_kernel.h"

namespace airborne {

FeatureVector make_features(const VehicleState& s, const Action& a) {
  return {s.roll, s.roll_rate, s.pitch, s.pitch_rate, s.yaw,
          s.yaw_rate, s.rpm, s.steer, a.rpm_rate, a.steer_rate};
}

void PhliModel::validate() const {
  if (layer_dims[0] != kFeatureDim || layer_dims[kLayerCount] != kTargetDim) {
    throw ModelFormatError("model: layer dims must start with 10 and end with 3");
  }
  if (layers.size() != kLayerCount) {
    throw ModelFormatError("model: expected 4 layers, got " +
                           std::to_string(layers.size()));
  }
  for (int l = 0; l < kLayerCount; ++l) {
    const DenseLayer& layer = layers[l];
    if (layer_dims[l] <= 0 || layer_dims[l + 1] <= 0 ||
        layer.in != layer_dims[l] || layer.out != layer_dims[l + 1] ||
        layer.weights.size() !=
            static_cast<std::size_t>(layer.in) * layer.out ||
        layer.biases.size() != static_cast<std::size_t>(layer.out)) {
      throw ModelFormatError("model: layer " + std::to_string(l) +
                             " shape does not match layer dims");
    }
  }
  auto check_norm = [](const Normalization& n, std::size_t dim,
                       const char* what) {
    if (n.mean.size() != dim || n.std.size() != dim) {
      throw ModelFormatError(std::string("model: ") + what +
                             " normalization has wrong size");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(n.mean[i]) || !(n.std[i] > 0.0) ||
          !std::isfinite(n.std[i])) {
        throw ModelFormatError(std::string("model: ") + what +
                               " std must be finite and > 0");
      }
    }
  };
  check_norm(input_norm, kFeatureDim, "input");
  check_norm(output_norm, kTargetDim, "output");
  if (!(dt > 0.0)) throw ModelFormatError("model: dt must be > 0");
}

PhliModel PhliModel::zeros(std::array<int, kLayerCount + 1> dims, double dt) {
  PhliModel m;
  m.layer_dims = dims;
  m.dt = dt;
  for (int l = 0; l < kLayerCount; ++l) {
    DenseLayer layer;
    layer.in = dims[l];
    layer.out = dims[l + 1];
    layer.weights.assign(static_cast<std::size_t>(layer.in) * layer.out, 0.0);
    layer.biases.assign(layer.out, 0.0);
    m.layers.push_back(std::move(layer));
  }
  m.input_norm = {std::vector<double>(kFeatureDim, 0.0),
                  std::vector<double>(kFeatureDim, 1.0)};
  m.output_norm = {std::vector<double>(kTargetDim, 0.0),
                   std::vector<double>(kTargetDim, 1.0)};
  m.validate();
  return m;
}

PhliModel PhliModel::random(std::array<int, kLayerCount + 1> dims, double dt,
                            std::uint64_t seed) {
  PhliModel m = zeros(dims, dt);
  std::mt19937_64 rng(seed);
  for (DenseLayer& layer : m.layers) {
    const double bound = std::sqrt(6.0 / (layer.in + layer.out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : layer.weights) w = dist(rng);
  }
  return m;
}

std::size_t PhliModel::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers) {
    n += layer.weights.size() + layer.biases.size();
  }
  return n;
}

void mlp_forward(const PhliModel& m, const double* x_norm, double* y_norm,
                 std::vector<double>* hidden) {
  // Per-thread scratch; the planner calls this tens of thousands of times
  // per cycle.
  thread_local std::vector<double> a;
  thread_local std::vector<double> z;
  int width = 0;
  for (int d : m.layer_dims) width = std::max(width, d);
  a.resize(width);
  z.resize(width);
  std::copy(x_norm, x_norm + m.layer_dims[0], a.begin());
  if (hidden != nullptr) hidden->clear();

  for (int l = 0; l < kLayerCount; ++l) {
    const DenseLayer& layer = m.layers[l];
    const double* w = layer.weights.data();
    double* zp = z.data();
    std::copy(layer.biases.begin(), layer.biases.end(), zp);
    // Row-wise accumulation keeps the inner loop contiguous over outputs.
    for (int k = 0; k < layer.in; ++k) {
      const double xk = a[k];
      const double* row = w + static_cast<std::size_t>(k) * layer.out;
      for (int j = 0; j < layer.out; ++j) zp[j] += xk * row[j];
    }
    if (l + 1 < kLayerCount) {
      detail::tanh_inplace(zp, layer.out);
      std::copy(zp, zp + layer.out, a.begin());
      if (hidden != nullptr) {
        hidden->insert(hidden->end(), a.begin(), a.begin() + layer.out);
      }
    } else {
      std::copy(zp, zp + layer.out, y_norm);
    }
  }
}

void mlp_forward_batch(const PhliModel& m, const double* x_norm, std::size_t n,
                       double* y_norm) {
  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  // Eigen rounds differently depending on operand alignment, so every
  // operand is an owned (aligned) copy; results then do not depend on where
  // the caller's buffers happen to live.
  thread_local RowMat act[2], out, w;
  thread_local Eigen::RowVectorXd b;
  const auto rows = static_cast<Eigen::Index>(n);
  act[1] = Eigen::Map<const RowMat>(x_norm, rows, m.layer_dims[0]);
  for (int l = 0; l < kLayerCount; ++l) {
    const DenseLayer& layer = m.layers[l];
    w = Eigen::Map<const RowMat>(layer.weights.data(), layer.in, layer.out);
    b = Eigen::Map<const Eigen::RowVectorXd>(layer.biases.data(), layer.out);
    const RowMat& in = act[(l + 1) % 2];
    if (l + 1 < kLayerCount) {
      RowMat& z = act[l % 2];
      z.noalias() = in * w;
      z.rowwise() += b;
      detail::tanh_inplace(z.data(), static_cast<long>(z.size()));
    } else {
      out.noalias() = in * w;
      out.rowwise() += b;
      std::copy(out.data(), out.data() + out.size(), y_norm);
    }
  }
}

AngularAccel g_phi_forward(const PhliModel& m, const VehicleState& s,
                           const Action& a) {
  const FeatureVector f = make_features(s, a);
  FeatureVector x{};
  for (int i = 0; i < kFeatureDim; ++i) {
    x[i] = (f[i] - m.input_norm.mean[i]) / m.input_norm.std[i];
  }
  std::array<double, kTargetDim> y{};
  mlp_forward(m, x.data(), y.data());
  std::array<double, kTargetDim> acc{};
  for (int i = 0; i < kTargetDim; ++i) {
    acc[i] = y[i] * m.output_norm.std[i] + m.output_norm.mean[i];
  }
  return {acc[0], acc[1], acc[2]};
}

VehicleState h_xi_step(const AngularAccel& acc, const VehicleState& s,
                       const Action& a, double dt,
                       const ActuationLimits& limits) {
  return advance(acc, s, a, dt, limits);
}

VehicleState phli_step(const PhliModel& m, const VehicleState& s,
                       const Action& a, const ActuationLimits& limits) {
  const VehicleState cs = clamp_state(s, limits);
  const Action ca = clamp_action(a, cs, limits, m.dt);
  return h_xi_step(g_phi_forward(m, cs, ca), cs, ca, m.dt, limits);
}

void phli_step_batch(const PhliModel& m, std::span<const VehicleState> s,
                     std::span<const Action> a, const ActuationLimits& limits,
                     std::span<VehicleState> out) {
  const std::size_t n = s.size();
  if (a.size() != n || out.size() != n) {
    throw ArgumentError("phli_step_batch: span sizes differ");
  }
  thread_local std::vector<VehicleState> cs;
  thread_local std::vector<Action> ca;
  thread_local std::vector<double> x, y;
  cs.resize(n);
  ca.resize(n);
  x.resize(n * kFeatureDim);
  y.resize(n * kTargetDim);
  for (std::size_t i = 0; i < n; ++i) {
    cs[i] = clamp_state(s[i], limits);
    ca[i] = clamp_action(a[i], cs[i], limits, m.dt);
    const FeatureVector f = make_features(cs[i], ca[i]);
    for (int j = 0; j < kFeatureDim; ++j) {
      x[i * kFeatureDim + j] =
          (f[j] - m.input_norm.mean[j]) / m.input_norm.std[j];
    }
  }
  mlp_forward_batch(m, x.data(), n, y.data());
  for (std::size_t i = 0; i < n; ++i) {
    const double* yi = &y[i * kTargetDim];
    const AngularAccel acc{
        yi[0] * m.output_norm.std[0] + m.output_norm.mean[0],
        yi[1] * m.output_norm.std[1] + m.output_norm.mean[1],
        yi[2] * m.output_norm.std[2] + m.output_norm.mean[2]};
    out[i] = h_xi_step(acc, cs[i], ca[i], m.dt, limits);
  }
}

namespace {

void write_line(std::ostream& out, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << v[i];
  }
  out << '\n';
}

std::vector<double> read_line(std::istream& in, std::size_t expected,
                              const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ModelFormatError("model file: missing " + what + " line");
  }
  std::istringstream ss(line);
  std::vector<double> v;
  double x;
  while (ss >> x) v.push_back(x);
  if (!ss.eof()) {
    throw ModelFormatError("model file: non-numeric token in " + what);
  }
  if (v.size() != expected) {
    throw ModelFormatError("model file: " + what + " has " +
                           std::to_string(v.size()) + " values, expected " +
                           std::to_string(expected));
  }
  return v;
}

}  // namespace

void write_model(const PhliModel& m, std::ostream& out) {
  m.validate();
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "phli-v1\n";
  for (int l = 0; l <= kLayerCount; ++l) {
    out << m.layer_dims[l] << (l == kLayerCount ? '\n' : ' ');
  }
  out << m.dt << '\n';
  for (const DenseLayer& layer : m.layers) {
    write_line(out, layer.weights);
    write_line(out, layer.biases);
  }
  write_line(out, m.input_norm.mean);
  write_line(out, m.input_norm.std);
  write_line(out, m.output_norm.mean);
  write_line(out, m.output_norm.std);
  out.flags(old_flags);
  out.precision(old_precision);
}

PhliModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "phli-v1") {
    throw ModelFormatError("model file: expected header 'phli-v1'");
  }
  const std::vector<double> dims_raw =
      read_line(in, kLayerCount + 1, "layer dims");
  std::array<int, kLayerCount + 1> dims{};
  for (int l = 0; l <= kLayerCount; ++l) {
    if (dims_raw[l] != std::floor(dims_raw[l]) || dims_raw[l] < 1 ||
        dims_raw[l] > 1e6) {
      throw ModelFormatError("model file: layer dims must be positive integers");
    }
    dims[l] = static_cast<int>(dims_raw[l]);
  }
  if (dims[0] != kFeatureDim || dims[kLayerCount] != kTargetDim) {
    throw ModelFormatError("model file: layer dims must start with 10 and end with 3");
  }
  const double dt = read_line(in, 1, "dt")[0];
  if (!(dt > 0.0)) throw ModelFormatError("model file: dt must be > 0");

  PhliModel m = PhliModel::zeros(dims, dt);
  for (int l = 0; l < kLayerCount; ++l) {
    DenseLayer& layer = m.layers[l];
    const std::string tag = "layer " + std::to_string(l);
    layer.weights = read_line(in, layer.weights.size(), tag + " weights");
    layer.biases = read_line(in, layer.biases.size(), tag + " biases");
  }
  m.input_norm.mean = read_line(in, kFeatureDim, "input means");
  m.input_norm.std = read_line(in, kFeatureDim, "input stds");
  m.output_norm.mean = read_line(in, kTargetDim, "output means");
  m.output_norm.std = read_line(in, kTargetDim, "output stds");
  m.validate();
  return m;
}

void save_model(const PhliModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelFormatError("cannot open model file for writing: " + path);
  write_model(m, out);
  if (!out) throw ModelFormatError("failed writing model file: " + path);
}

PhliModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open model file: " + path);
  try {
    return read_model(in);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

PhliForwardModel::PhliForwardModel(std::shared_ptr<const PhliModel> model,
                                   const ActuationLimits& limits)
    : model_(std::move(model)), limits_(limits) {
  if (!model_) throw ModelFormatError("PhliForwardModel: null model");
  model_->validate();
  limits_.validate();
}

VehicleState PhliForwardModel::step(const VehicleState& s,
                                    const Action& a) const {
  return phli_step(*model_, s, a, limits_);
}

void PhliForwardModel::step_batch(std::span<const VehicleState> s,
                                  std::span<const Action> a,
                                  std::span<VehicleState> out) const {
  phli_step_batch(*model_, s, a, limits_, out);
}

}  // namespace airborne
