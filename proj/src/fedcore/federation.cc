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

#include "vhfl/fedcore/federation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "vhfl/datagen/batching.h"
#include "vhfl/errors.h"
#include "vhfl/random.h"

namespace vhfl::fedcore {

using nnet::Matrix;

std::vector<int> SelectClients(int N, int K, std::uint64_t seed, int t_g) {
  if (N < 1 || K < 1 || K > N) {
    throw ValidationError(fmt::format("cannot select K={} of N={} clients", K, N));
  }
  std::vector<int> ids(N);
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng = MakeRng(seed, StreamTag::kClientSelection, {static_cast<std::uint64_t>(t_g)});
  for (int i = 0; i < K; ++i) {
    std::uniform_int_distribution<int> pick(i, N - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(K);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<FeatureTable> CenterBroadcast(const DenseNet& w0, const GlobalStore& global,
                                          std::span<const ClientData> clients,
                                          std::span<const int> selected) {
  std::vector<FeatureTable> out;
  out.reserve(selected.size());
  for (int idx : selected) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= clients.size()) {
      throw ValidationError(fmt::format("selected client index {} out of range", idx));
    }
    const ClientData& c = clients[idx];
    std::vector<std::int64_t> ids;
    ids.reserve(c.samples.size());
    for (const auto& s : c.samples) ids.push_back(s.id);
    FeatureTable table(w0.out_dim());
    if (!ids.empty()) {
      const Matrix u0 = nnet::Predict(w0, global.Gather(ids));
      for (std::size_t r = 0; r < ids.size(); ++r) {
        table.Insert(ids[r], u0.row(static_cast<Eigen::Index>(r)).transpose());
      }
    }
    out.push_back(std::move(table));
  }
  return out;
}

ClientUpdateResult ClientUpdate(const ClientData& client, const DenseNet& wbar,
                                const FeatureTable* u0, const LocalTraining& opts) {
  if (client.samples.empty()) {
    throw ValidationError(fmt::format("client {} has no training samples", client.client_id));
  }
  if (opts.E_l < 1 || opts.B < 1) {
    throw ValidationError(fmt::format("E_l ({}) and B ({}) must be >= 1", opts.E_l, opts.B));
  }
  const int d_local = static_cast<int>(client.samples.front().x_local.size());
  const bool vertical = u0 != nullptr;
  const bool concat = vertical && opts.combiner == Combiner::kConcat;
  const int u0_dim = vertical ? u0->dim() : 0;
  const int want_in = d_local + (concat ? u0_dim : 0);
  if (wbar.in_dim() != want_in) {
    throw ShapeError(fmt::format("federal model reads {} inputs, client {} supplies {}",
                                 wbar.in_dim(), client.client_id, want_in));
  }
  if (vertical && !concat && wbar.out_dim() != u0_dim) {
    throw ShapeError(fmt::format("additive combiner needs u0 dim {} == output dim {}", u0_dim,
                                 wbar.out_dim()));
  }

  std::unordered_map<std::int64_t, Eigen::Index> row_of;
  if (vertical) {
    row_of.reserve(client.samples.size());
    for (std::size_t i = 0; i < client.samples.size(); ++i) {
      row_of.emplace(client.samples[i].id, static_cast<Eigen::Index>(i));
    }
  }
  Matrix vsum = Matrix::Zero(vertical ? static_cast<Eigen::Index>(client.samples.size()) : 0,
                             u0_dim);
  const double total = static_cast<double>(client.samples.size());

  Rng rng = MakeRng(opts.seed, StreamTag::kBatchOrder,
                    {static_cast<std::uint64_t>(client.client_id),
                     static_cast<std::uint64_t>(opts.t_g)});
  DenseNet w = wbar;
  for (int e = 0; e < opts.E_l; ++e) {
    const double eta =
        opts.eta.At(static_cast<std::int64_t>(opts.t_g) * opts.E_l + e);
    if (!std::isfinite(eta) || eta < 0.0) {
      throw ValidationError(fmt::format("local step size {} is not a finite value >= 0", eta));
    }
    for (const datagen::Batch& b : datagen::MakeBatches(client.samples, u0, opts.B, rng)) {
      Matrix input;
      if (concat) {
        input.resize(b.x_local.rows(), u0_dim + d_local);
        input << b.side, b.x_local;
      } else {
        input = b.x_local;
      }
      nnet::ForwardResult fwd = nnet::Forward(w, input);
      if (vertical && !concat) fwd.outputs += b.side;
      const nnet::LossResult loss = nnet::MseLoss(fwd.outputs, b.y);
      const nnet::Gradients grads = nnet::Backward(w, fwd.trace, loss.grad, concat);
      if (vertical) {
        // Batch-mean gradient rows rescaled to the client's full mean loss.
        const double scale = static_cast<double>(b.ids.size()) / total;
        const Matrix g = concat ? Matrix(grads.input_grad.leftCols(u0_dim)) : loss.grad;
        for (std::size_t r = 0; r < b.ids.size(); ++r) {
          vsum.row(row_of.at(b.ids[r])) += scale * g.row(static_cast<Eigen::Index>(r));
        }
      }
      if (eta > 0.0) w = nnet::SgdStep(w, grads, eta);
    }
  }

  ClientUpdateResult result{std::move(w), FeatureTable(u0_dim)};
  if (vertical) {
    for (std::size_t i = 0; i < client.samples.size(); ++i) {
      result.vgrad.Insert(client.samples[i].id,
                          vsum.row(static_cast<Eigen::Index>(i)).transpose() / opts.E_l);
    }
  }
  return result;
}

std::optional<DenseNet> AggregateWeights(std::span<const Upload> uploads, AggregationRule rule,
                                         int N, int K) {
  if (uploads.empty()) return std::nullopt;
  for (const Upload& u : uploads) {
    if (u.w == nullptr) throw ValidationError("upload without a model");
    if (!std::isfinite(u.q) || u.q < 0.0) {
      throw ValidationError(fmt::format("upload weight {} must be finite and >= 0", u.q));
    }
    if (!u.w->SameShape(*uploads.front().w)) throw ShapeError("uploaded models differ in shape");
  }
  std::vector<double> coef(uploads.size());
  if (rule == AggregationRule::kRenormalized) {
    if (uploads.size() == 1) return *uploads.front().w;
    double total = 0.0;
    for (const Upload& u : uploads) total += u.q;
    if (!(total > 0.0)) throw ValidationError("received upload weights sum to zero");
    for (std::size_t i = 0; i < uploads.size(); ++i) coef[i] = uploads[i].q / total;
  } else {
    if (K < 1 || N < K) throw ValidationError(fmt::format("bad K={} for N={}", K, N));
    const double scale = static_cast<double>(N) / static_cast<double>(K);
    for (std::size_t i = 0; i < uploads.size(); ++i) coef[i] = scale * uploads[i].q;
  }
  DenseNet out = *uploads.front().w;
  auto& layers = out.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weights.setZero();
    layers[l].bias.setZero();
    for (std::size_t i = 0; i < uploads.size(); ++i) {
      const auto& src = uploads[i].w->layers()[l];
      layers[l].weights += coef[i] * src.weights;
      layers[l].bias += coef[i] * src.bias;
    }
  }
  return out;
}

DenseNet CentralUpdate(const DenseNet& w0, std::span<const FeatureTable> vgrads,
                       const GlobalStore& global, double eta0) {
  std::vector<std::int64_t> ids;
  Eigen::Index rows = 0;
  for (const FeatureTable& t : vgrads) {
    if (t.dim() != w0.out_dim()) {
      throw ShapeError(fmt::format("vertical gradient dim {} != central output dim {}", t.dim(),
                                   w0.out_dim()));
    }
    rows += static_cast<Eigen::Index>(t.size());
  }
  if (rows == 0) return w0;
  if (global.dim() != w0.in_dim()) {
    throw ShapeError(fmt::format("global features have dim {}, central model reads {}",
                                 global.dim(), w0.in_dim()));
  }
  Matrix x(rows, w0.in_dim());
  Matrix g(rows, w0.out_dim());
  Eigen::Index r = 0;
  for (const FeatureTable& t : vgrads) {
    for (std::int64_t id : t.SortedIds()) {
      x.row(r) = global.At(id).transpose();
      g.row(r) = t.At(id).transpose();
      ++r;
    }
  }
  const nnet::ForwardResult fwd = nnet::Forward(w0, x);
  return nnet::SgdStep(w0, nnet::Backward(w0, fwd.trace, g, false), eta0);
}

}  // namespace vhfl::fedcore
