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

#ifndef VHFL_FEDCORE_FEDERATION_H_
#define VHFL_FEDCORE_FEDERATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vhfl/datagen/dataset.h"
#include "vhfl/fedcore/config.h"
#include "vhfl/nnet/dense_net.h"

namespace vhfl::fedcore {

using datagen::ClientData;
using datagen::FeatureTable;
using datagen::GlobalStore;
using nnet::DenseNet;

struct CenterState {
  DenseNet w0;    // empty in the local-only modes
  DenseNet wbar;  // federal model
  Combiner combiner = Combiner::kConcat;
  int t_g = 0;  // completed global epochs

  bool uses_global() const { return !w0.empty(); }
};

// K distinct client indices in [0, N), uniform without replacement, sorted.
// Deterministic in (seed, t_g). Throws ValidationError unless 1 <= K <= N.
std::vector<int> SelectClients(int N, int K, std::uint64_t seed, int t_g);

// u0 = w0(x_global) for every training id of each selected client. Entry i of
// the result belongs to clients[selected[i]].
// Throws MissingFeatureError when the store lacks an id.
std::vector<FeatureTable> CenterBroadcast(const DenseNet& w0, const GlobalStore& global,
                                          std::span<const ClientData> clients,
                                          std::span<const int> selected);

struct ClientUpdateResult {
  DenseNet w;
  // Per training id: d f_j / d u0, averaged over the local epochs, where f_j
  // is the client's mean loss. Empty (dim 0) without u0.
  FeatureTable vgrad;
};

struct LocalTraining {
  int E_l = 1;
  int B = 32;
  Schedule eta;
  int t_g = 0;             // global epoch; local step index is t_g * E_l + e
  std::uint64_t seed = 1;  // batch order comes from (seed, client_id, t_g)
  Combiner combiner = Combiner::kConcat;
};

// Starts from wbar and runs E_l epochs of mini-batch SGD on the client's
// training split. With u0 the input is combined with the fixed u0 rows and
// vertical gradients are recorded; pass null for plain local training.
// A step size of exactly 0 leaves the weights untouched.
// Throws ShapeError, ValidationError (empty dataset, bad step size) or
// MissingFeatureError.
ClientUpdateResult ClientUpdate(const ClientData& client, const DenseNet& wbar,
                                const FeatureTable* u0, const LocalTraining& opts);

struct Upload {
  double q = 0.0;
  const DenseNet* w = nullptr;
};

// Weighted average of the uploaded federal models; nullopt when nothing was
// received. Throws ShapeError on mismatched uploads.
std::optional<DenseNet> AggregateWeights(std::span<const Upload> uploads, AggregationRule rule,
                                         int N, int K);

// One SGD step on w0 that back-propagates the summed vertical gradients
// through w0(x_global). Throws MissingFeatureError for unknown ids.
DenseNet CentralUpdate(const DenseNet& w0, std::span<const FeatureTable> vgrads,
                       const GlobalStore& global, double eta0);

}  // namespace vhfl::fedcore

#endif  // VHFL_FEDCORE_FEDERATION_H_
