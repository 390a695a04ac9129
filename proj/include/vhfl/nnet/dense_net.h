/*
 * Copyright 2026 The vhfl-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VHFL_NNET_DENSE_NET_H_
#define VHFL_NNET_DENSE_NET_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vhfl/random.h"

namespace vhfl::nnet {

// Rows are samples, columns are features.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { kIdentity, kRelu, kTanh };

std::string_view ActivationName(Activation a);
// Throws ValidationError on an unknown name.
Activation ParseActivation(std::string_view name);

// y = act(x W^T + b) for a row batch x.
struct DenseLayer {
  Matrix weights;  // out_dim x in_dim
  Vector bias;     // out_dim
  Activation activation = Activation::kIdentity;

  int in_dim() const { return static_cast<int>(weights.cols()); }
  int out_dim() const { return static_cast<int>(weights.rows()); }
};

class DenseNet {
 public:
  DenseNet() = default;
  // Validates dimension chaining and finiteness; throws ShapeError or
  // ValidationError.
  explicit DenseNet(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }
  std::size_t num_layers() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  int in_dim() const;
  int out_dim() const;
  std::size_t num_parameters() const;

  // Parameters in layer order, each layer as row-major weights then bias.
  std::vector<double> Flatten() const;
  // Same topology, parameters replaced from a Flatten()-ordered vector.
  DenseNet WithParameters(std::span<const double> params) const;

  bool SameShape(const DenseNet& other) const;
  friend bool operator==(const DenseNet& a, const DenseNet& b);

 private:
  std::vector<DenseLayer> layers_;
};

struct Architecture {
  int in_dim = 1;
  std::vector<int> hidden;
  int out_dim = 1;
  Activation hidden_activation = Activation::kTanh;
  Activation output_activation = Activation::kIdentity;
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero bias.
DenseNet InitDenseNet(const Architecture& arch, Rng& rng);

// Everything backward() needs from one forward pass.
struct ForwardTrace {
  std::vector<Matrix> inputs;           // input to layer i (inputs[0] is the batch)
  std::vector<Matrix> pre_activations;  // x W^T + b for layer i
  std::uint64_t net_fingerprint = 0;
};

struct ForwardResult {
  Matrix outputs;
  ForwardTrace trace;
};

// Throws ShapeError on a column mismatch, ValidationError on non-finite input.
ForwardResult Forward(const DenseNet& net, const Matrix& batch);
// Outputs only; no trace is kept.
Matrix Predict(const DenseNet& net, const Matrix& batch);

struct LossResult {
  double loss = 0.0;
  Matrix grad;
};

// Mean over rows of the squared Euclidean error, and its gradient in pred.
LossResult MseLoss(const Matrix& pred, const Matrix& target);

struct LayerGradients {
  Matrix weights;
  Vector bias;
};

struct Gradients {
  std::vector<LayerGradients> layers;
  Matrix input_grad;  // batch x in_dim; empty unless requested
  bool has_input_grad = false;
};

// Reverse-mode gradients of a scalar loss whose gradient with respect to the
// net outputs is `loss_grad`. Throws ShapeError when `trace` was not produced
// by `net` (different shapes or parameters changed since the forward pass).
Gradients Backward(const DenseNet& net, const ForwardTrace& trace,
                   const Matrix& loss_grad, bool want_input_grad);

// p <- p - eta * g for every parameter. eta must be positive.
DenseNet SgdStep(const DenseNet& net, const Gradients& grads, double eta);

// Cheap order-sensitive hash of topology and parameter bits.
std::uint64_t Fingerprint(const DenseNet& net);

}  // namespace vhfl::nnet

#endif  // VHFL_NNET_DENSE_NET_H_
