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

#include "vhfl/fedcore/runners.h"

#include <chrono>

#include <fmt/format.h>

#include "vhfl/datagen/batching.h"
#include "vhfl/errors.h"
#include "vhfl/fedcore/evaluation.h"
#include "vhfl/parallel.h"
#include "vhfl/random.h"

namespace vhfl::fedcore {

using datagen::FederationDataset;
using datagen::SampleRecord;
using nnet::Matrix;

namespace {

using Clock = std::chrono::steady_clock;

void CheckInputs(const FederationConfig& config, const FederationDataset& data, bool use_global) {
  config.Validate();
  data.Validate();
  if (static_cast<std::size_t>(config.N) != data.num_clients()) {
    throw ValidationError(fmt::format("config has N={} clients, dataset has {}", config.N,
                                      data.num_clients()));
  }
  if (use_global && config.model.combiner == Combiner::kAdditive &&
      config.model.u0_dim != data.d_label) {
    throw ValidationError(fmt::format("additive combiner needs model.u0_dim ({}) == d_label ({})",
                                      config.model.u0_dim, data.d_label));
  }
}

// Layer sizes must match; activations may differ from the configured ones.
bool SameDims(const DenseNet& a, const DenseNet& b) {
  if (a.num_layers() != b.num_layers()) return false;
  for (std::size_t i = 0; i < a.num_layers(); ++i) {
    if (a.layers()[i].in_dim() != b.layers()[i].in_dim() ||
        a.layers()[i].out_dim() != b.layers()[i].out_dim()) {
      return false;
    }
  }
  return true;
}

DenseNet Pick(const std::optional<DenseNet>& given, DenseNet fallback, std::string_view what) {
  if (!given) return fallback;
  if (!SameDims(*given, fallback)) {
    throw ShapeError(fmt::format("initial {} does not match the configured architecture", what));
  }
  return *given;
}

class Recorder {
 public:
  Recorder(Mode mode, const FederationConfig& config, const FederationDataset& data)
      : data_(data),
        train_(datagen::Pool(data.train)),
        test_(datagen::Pool(data.test)) {
    trace_.mode = std::string(ModeName(mode));
    trace_.seed = config.seed;
    trace_.epochs.reserve(static_cast<std::size_t>(config.T_g));
  }

  void Record(const CenterState& center, int k_received, bool carried, Clock::time_point start) {
    const GlobalStore* g = center.uses_global() ? &data_.global : nullptr;
    EpochRecord r;
    r.epoch = center.t_g;
    r.train_mse = Evaluate(center, g, train_).mse;
    const Metrics test = Evaluate(center, g, test_);
    r.test_mse = test.mse;
    r.test_error_ratio = test.error_ratio;
    r.k_received = k_received;
    r.carried_forward = carried;
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    trace_.epochs.push_back(r);
  }

  const std::vector<SampleRecord>& train() const { return train_; }
  TrainingTrace Take() { return std::move(trace_); }

 private:
  const FederationDataset& data_;
  std::vector<SampleRecord> train_;
  std::vector<SampleRecord> test_;
  TrainingTrace trace_;
};

LocalTraining LocalOpts(const FederationConfig& config, int t_g) {
  LocalTraining o;
  o.E_l = config.E_l;
  o.B = config.B;
  o.eta = config.eta;
  o.t_g = t_g;
  o.seed = config.seed;
  o.combiner = config.model.combiner;
  return o;
}

std::vector<std::size_t> Delivered(const FederationConfig& config, std::size_t n, int t_g) {
  if (config.deadline_channel) {
    return netqueue::ApplyChannel(*config.deadline_channel, n, static_cast<std::uint64_t>(t_g));
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return all;
}

// Shared loop of the two federated modes.
RunResult RunFederated(Mode mode, const FederationConfig& config, const FederationDataset& data,
                       CenterState center) {
  const bool vertical = mode == Mode::kVhfl;
  Recorder rec(mode, config, data);
  for (int t = 0; t < config.T_g; ++t) {
    const auto start = Clock::now();
    const std::vector<int> selected = SelectClients(config.N, config.K, config.seed, t);
    std::vector<FeatureTable> u0;
    if (vertical) u0 = CenterBroadcast(center.w0, data.global, data.train, selected);

    std::vector<ClientUpdateResult> results(selected.size());
    const LocalTraining opts = LocalOpts(config, t);
    ParallelFor(selected.size(), config.workers, [&](std::size_t i) {
      results[i] = ClientUpdate(data.train[selected[i]], center.wbar,
                                vertical ? &u0[i] : nullptr, opts);
    });

    const std::vector<std::size_t> got = Delivered(config, selected.size(), t);
    if (!got.empty()) {
      std::vector<Upload> uploads;
      std::vector<FeatureTable> vgrads;
      for (std::size_t i : got) {
        uploads.push_back({data.train[selected[i]].q, &results[i].w});
        if (vertical) vgrads.push_back(std::move(results[i].vgrad));
      }
      center.wbar = *AggregateWeights(uploads, config.aggregation, config.N, config.K);
      if (vertical) center.w0 = CentralUpdate(center.w0, vgrads, data.global, config.eta0.At(t));
    }
    center.t_g = t + 1;
    rec.Record(center, static_cast<int>(got.size()), got.empty(), start);
  }
  return {std::move(center), rec.Take()};
}

}  // namespace

std::string_view ModeName(Mode m) {
  switch (m) {
    case Mode::kVhfl:
      return "vhfl";
    case Mode::kHfl:
      return "hfl";
    case Mode::kCloud:
      return "cloud";
    case Mode::kCloudLocal:
      return "cloud_local";
  }
  return "?";
}

Mode ParseMode(std::string_view name) {
  if (name == "vhfl") return Mode::kVhfl;
  if (name == "hfl") return Mode::kHfl;
  if (name == "cloud") return Mode::kCloud;
  if (name == "cloud_local") return Mode::kCloudLocal;
  throw ValidationError(fmt::format("unknown training mode '{}'", name));
}

DenseNet InitialGlobalModel(const FederationConfig& config, int d_global) {
  Rng rng = MakeRng(config.seed, StreamTag::kInitGlobalModel);
  return nnet::InitDenseNet(GlobalArchitecture(config.model, d_global), rng);
}

DenseNet InitialLocalModel(const FederationConfig& config, int d_local, int d_label,
                           bool use_global) {
  Rng rng = MakeRng(config.seed, StreamTag::kInitLocalModel);
  return nnet::InitDenseNet(LocalArchitecture(config.model, d_local, d_label, use_global), rng);
}

RunResult RunVhfl(const FederationConfig& config, const FederationDataset& data,
                  const InitialModels& init) {
  CheckInputs(config, data, true);
  CenterState center;
  center.combiner = config.model.combiner;
  center.w0 = Pick(init.w0, InitialGlobalModel(config, data.d_global), "w0");
  center.wbar = Pick(init.wbar, InitialLocalModel(config, data.d_local, data.d_label, true), "wbar");
  return RunFederated(Mode::kVhfl, config, data, std::move(center));
}

RunResult RunHfl(const FederationConfig& config, const FederationDataset& data,
                 const InitialModels& init) {
  CheckInputs(config, data, false);
  CenterState center;
  center.combiner = config.model.combiner;
  center.wbar =
      Pick(init.wbar, InitialLocalModel(config, data.d_local, data.d_label, false), "wbar");
  return RunFederated(Mode::kHfl, config, data, std::move(center));
}

RunResult RunCloud(const FederationConfig& config, const FederationDataset& data,
                   bool use_global, const InitialModels& init) {
  CheckInputs(config, data, use_global);
  const Mode mode = use_global ? Mode::kCloud : Mode::kCloudLocal;
  CenterState center;
  center.combiner = config.model.combiner;
  if (use_global) center.w0 = Pick(init.w0, InitialGlobalModel(config, data.d_global), "w0");
  center.wbar = Pick(init.wbar,
                     InitialLocalModel(config, data.d_local, data.d_label, use_global), "wbar");

  Recorder rec(mode, config, data);
  // The pooled data acts as a single client with id 0, so a one-client
  // federation and the local-only cloud run draw identical batches.
  datagen::ClientData pooled{0, rec.train(), 1.0};
  const bool concat = config.model.combiner == Combiner::kConcat;
  const int n_clients = static_cast<int>(data.num_clients());
  for (int t = 0; t < config.T_g; ++t) {
    const auto start = Clock::now();
    if (!use_global) {
      center.wbar = ClientUpdate(pooled, center.wbar, nullptr, LocalOpts(config, t)).w;
    } else {
      Rng rng = MakeRng(config.seed, StreamTag::kBatchOrder, {0, static_cast<std::uint64_t>(t)});
      for (int e = 0; e < config.E_l; ++e) {
        const double eta = config.eta.At(static_cast<std::int64_t>(t) * config.E_l + e);
        for (const auto& b : datagen::MakeBatches(pooled.samples, &data.global, config.B, rng)) {
          const nnet::ForwardResult f0 = nnet::Forward(center.w0, b.side);
          const Matrix& u0 = f0.outputs;
          Matrix input;
          if (concat) {
            input.resize(b.x_local.rows(), u0.cols() + b.x_local.cols());
            input << u0, b.x_local;
          } else {
            input = b.x_local;
          }
          nnet::ForwardResult f = nnet::Forward(center.wbar, input);
          if (!concat) f.outputs += u0;
          const nnet::LossResult loss = nnet::MseLoss(f.outputs, b.y);
          const nnet::Gradients g = nnet::Backward(center.wbar, f.trace, loss.grad, concat);
          const Matrix gu = concat ? Matrix(g.input_grad.leftCols(u0.cols())) : loss.grad;
          const nnet::Gradients g0 = nnet::Backward(center.w0, f0.trace, gu, false);
          center.wbar = nnet::SgdStep(center.wbar, g, eta);
          center.w0 = nnet::SgdStep(center.w0, g0, eta);
        }
      }
    }
    center.t_g = t + 1;
    rec.Record(center, n_clients, false, start);
  }
  return {std::move(center), rec.Take()};
}

RunResult Run(Mode mode, const FederationConfig& config, const FederationDataset& data,
              const InitialModels& init) {
  switch (mode) {
    case Mode::kVhfl:
      return RunVhfl(config, data, init);
    case Mode::kHfl:
      return RunHfl(config, data, init);
    case Mode::kCloud:
      return RunCloud(config, data, true, init);
    case Mode::kCloudLocal:
      return RunCloud(config, data, false, init);
  }
  throw ValidationError("unknown training mode");
}

}  // namespace vhfl::fedcore
