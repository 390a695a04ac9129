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

#ifndef VHFL_FEDCORE_RUNNERS_H_
#define VHFL_FEDCORE_RUNNERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vhfl/datagen/dataset.h"
#include "vhfl/fedcore/config.h"
#include "vhfl/fedcore/federation.h"

namespace vhfl::fedcore {

enum class Mode { kVhfl, kHfl, kCloud, kCloudLocal };

std::string_view ModeName(Mode m);
Mode ParseMode(std::string_view name);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_mse = 0.0;
  double test_mse = 0.0;
  double test_error_ratio = 0.0;
  int k_received = 0;
  bool carried_forward = false;  // no upload arrived; models kept as they were
  double wall_seconds = 0.0;
};

struct TrainingTrace {
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> epochs;
};

struct RunResult {
  CenterState center;
  TrainingTrace trace;
};

// Starting points that replace the seeded initialization. Shapes must match
// the configured architectures.
struct InitialModels {
  std::optional<nnet::DenseNet> w0;
  std::optional<nnet::DenseNet> wbar;
};

// The initialization a run with this config would use.
nnet::DenseNet InitialGlobalModel(const FederationConfig& config, int d_global);
nnet::DenseNet InitialLocalModel(const FederationConfig& config, int d_local, int d_label,
                                 bool use_global);

// Each global epoch: select K clients, broadcast u0, update the clients in
// parallel, drop uploads through the deadline channel if configured,
// aggregate, update w0 once, evaluate.
RunResult RunVhfl(const FederationConfig& config, const datagen::FederationDataset& data,
                  const InitialModels& init = {});

// Federated averaging on local features only.
RunResult RunHfl(const FederationConfig& config, const datagen::FederationDataset& data,
                 const InitialModels& init = {});

// Centralized SGD on the pooled training split. One epoch makes E_l passes,
// so the step budget per epoch matches a federated client's. With use_global
// the composed model is trained end to end.
RunResult RunCloud(const FederationConfig& config, const datagen::FederationDataset& data,
                   bool use_global, const InitialModels& init = {});

RunResult Run(Mode mode, const FederationConfig& config, const datagen::FederationDataset& data,
              const InitialModels& init = {});

}  // namespace vhfl::fedcore

#endif  // VHFL_FEDCORE_RUNNERS_H_
