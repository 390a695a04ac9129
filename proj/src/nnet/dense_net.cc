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

#include "vhfl/nnet/dense_net.h"

#include <bit>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::nnet {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void HashWord(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

Matrix Activate(const Matrix& z, Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return z;
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kTanh:
      return z.array().tanh().matrix();
  }
  return z;
}

// d act / d z evaluated elementwise; `out` is act(z). The relu derivative at
// exactly zero is taken as 0.
Matrix ActivationDerivative(const Matrix& z, const Matrix& out, Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return Matrix::Ones(z.rows(), z.cols());
    case Activation::kRelu:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::kTanh:
      return (1.0 - out.array().square()).matrix();
  }
  return Matrix::Ones(z.rows(), z.cols());
}

Matrix Affine(const DenseLayer& layer, const Matrix& x) {
  Matrix z = x * layer.weights.transpose();
  z.rowwise() += layer.bias.transpose();
  return z;
}

void CheckBatch(const DenseNet& net, const Matrix& batch) {
  if (net.empty()) throw ShapeError("forward: net has no layers");
  if (batch.cols() != net.in_dim()) {
    throw ShapeError(fmt::format("forward: batch has {} columns, net expects {}",
                                 batch.cols(), net.in_dim()));
  }
  if (!batch.allFinite()) throw ValidationError("forward: batch contains non-finite values");
}

}  // namespace

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
  }
  return "identity";
}

Activation ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw ValidationError(fmt::format("unknown activation '{}'", name));
}

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    if (l.in_dim() < 1 || l.out_dim() < 1) {
      throw ShapeError(fmt::format("layer {}: dimensions must be >= 1", i));
    }
    if (l.bias.size() != l.out_dim()) {
      throw ShapeError(fmt::format("layer {}: bias has {} entries, expected {}", i,
                                   l.bias.size(), l.out_dim()));
    }
    if (i > 0 && layers_[i - 1].out_dim() != l.in_dim()) {
      throw ShapeError(fmt::format("layer {}: in_dim {} does not match previous out_dim {}",
                                   i, l.in_dim(), layers_[i - 1].out_dim()));
    }
    if (!l.weights.allFinite() || !l.bias.allFinite()) {
      throw ValidationError(fmt::format("layer {}: non-finite parameters", i));
    }
  }
}

int DenseNet::in_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }
int DenseNet::out_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim(); }

std::size_t DenseNet::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<double> DenseNet::Flatten() const {
  std::vector<double> out;
  out.reserve(num_parameters());
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) out.push_back(l.weights(r, c));
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out.push_back(l.bias(r));
  }
  return out;
}

DenseNet DenseNet::WithParameters(std::span<const double> params) const {
  if (params.size() != num_parameters()) {
    throw ShapeError(fmt::format("parameter vector has {} entries, net has {}", params.size(),
                                 num_parameters()));
  }
  std::vector<DenseLayer> layers = layers_;
  std::size_t k = 0;
  for (auto& l : layers) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = params[k++];
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = params[k++];
  }
  return DenseNet(std::move(layers));
}

bool DenseNet::SameShape(const DenseNet& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    const auto& b = other.layers_[i];
    if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim() || a.activation != b.activation)
      return false;
  }
  return true;
}

bool operator==(const DenseNet& a, const DenseNet& b) {
  if (!a.SameShape(b)) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    if (a.layers_[i].weights != b.layers_[i].weights) return false;
    if (a.layers_[i].bias != b.layers_[i].bias) return false;
  }
  return true;
}

DenseNet InitDenseNet(const Architecture& arch, Rng& rng) {
  std::vector<int> dims;
  dims.push_back(arch.in_dim);
  dims.insert(dims.end(), arch.hidden.begin(), arch.hidden.end());
  dims.push_back(arch.out_dim);
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    if (fan_in < 1 || fan_out < 1) throw ShapeError("architecture dimensions must be >= 1");
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) layer.weights(r, c) = dist(rng);
    layer.bias = Vector::Zero(fan_out);
    layer.activation = (i + 2 == dims.size()) ? arch.output_activation : arch.hidden_activation;
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

std::uint64_t Fingerprint(const DenseNet& net) {
  std::uint64_t h = kFnvOffset;
  for (const auto& l : net.layers()) {
    HashWord(h, static_cast<std::uint64_t>(l.in_dim()));
    HashWord(h, static_cast<std::uint64_t>(l.out_dim()));
    HashWord(h, static_cast<std::uint64_t>(l.activation));
    for (Eigen::Index i = 0; i < l.weights.size(); ++i)
      HashWord(h, std::bit_cast<std::uint64_t>(l.weights.data()[i]));
    for (Eigen::Index i = 0; i < l.bias.size(); ++i)
      HashWord(h, std::bit_cast<std::uint64_t>(l.bias.data()[i]));
  }
  return h;
}

ForwardResult Forward(const DenseNet& net, const Matrix& batch) {
  CheckBatch(net, batch);
  ForwardResult result;
  ForwardTrace& trace = result.trace;
  trace.inputs.reserve(net.num_layers());
  trace.pre_activations.reserve(net.num_layers());
  Matrix x = batch;
  for (const auto& layer : net.layers()) {
    Matrix z = Affine(layer, x);
    Matrix a = Activate(z, layer.activation);
    trace.inputs.push_back(std::move(x));
    trace.pre_activations.push_back(std::move(z));
    x = std::move(a);
  }
  result.outputs = std::move(x);
  trace.net_fingerprint = Fingerprint(net);
  return result;
}

Matrix Predict(const DenseNet& net, const Matrix& batch) {
  CheckBatch(net, batch);
  Matrix x = batch;
  for (const auto& layer : net.layers()) x = Activate(Affine(layer, x), layer.activation);
  return x;
}

LossResult MseLoss(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw ShapeError(fmt::format("mse: prediction is {}x{}, target is {}x{}", pred.rows(),
                                 pred.cols(), target.rows(), target.cols()));
  }
  if (pred.rows() == 0) throw ShapeError("mse: empty batch");
  const double n = static_cast<double>(pred.rows());
  const Matrix diff = pred - target;
  LossResult out;
  out.loss = diff.squaredNorm() / n;
  out.grad = (2.0 / n) * diff;
  return out;
}

Gradients Backward(const DenseNet& net, const ForwardTrace& trace, const Matrix& loss_grad,
                   bool want_input_grad) {
  const std::size_t n_layers = net.num_layers();
  if (trace.inputs.size() != n_layers || trace.pre_activations.size() != n_layers ||
      n_layers == 0) {
    throw ShapeError("backward: trace does not belong to this net");
  }
  if (trace.net_fingerprint != Fingerprint(net)) {
    throw ShapeError("backward: trace is stale (net changed since forward)");
  }
  const Eigen::Index batch = trace.inputs.front().rows();
  if (loss_grad.rows() != batch || loss_grad.cols() != net.out_dim()) {
    throw ShapeError(fmt::format("backward: loss gradient is {}x{}, expected {}x{}",
                                 loss_grad.rows(), loss_grad.cols(), batch, net.out_dim()));
  }

  Gradients grads;
  grads.layers.resize(n_layers);
  Matrix delta = loss_grad;
  for (std::size_t k = n_layers; k-- > 0;) {
    const DenseLayer& layer = net.layers()[k];
    const Matrix& z = trace.pre_activations[k];
    // The post-activation of layer k is the input of layer k+1, or recomputed
    // for the last layer.
    const Matrix out =
        (k + 1 < n_layers) ? trace.inputs[k + 1] : Activate(z, layer.activation);
    const Matrix dz = delta.cwiseProduct(ActivationDerivative(z, out, layer.activation));
    grads.layers[k].weights = dz.transpose() * trace.inputs[k];
    grads.layers[k].bias = dz.colwise().sum().transpose();
    if (k > 0 || want_input_grad) delta = dz * layer.weights;
  }
  if (want_input_grad) {
    grads.input_grad = std::move(delta);
    grads.has_input_grad = true;
  }
  return grads;
}

DenseNet SgdStep(const DenseNet& net, const Gradients& grads, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValidationError(fmt::format("sgd: learning rate must be positive, got {}", eta));
  }
  if (grads.layers.size() != net.num_layers()) throw ShapeError("sgd: gradient layer count");
  std::vector<DenseLayer> layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& g = grads.layers[i];
    if (g.weights.rows() != layers[i].weights.rows() ||
        g.weights.cols() != layers[i].weights.cols() || g.bias.size() != layers[i].bias.size()) {
      throw ShapeError(fmt::format("sgd: gradient shape mismatch at layer {}", i));
    }
    layers[i].weights -= eta * g.weights;
    layers[i].bias -= eta * g.bias;
  }
  return DenseNet(std::move(layers));
}

}  // namespace vhfl::nnet
