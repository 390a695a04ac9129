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

#ifndef VHFL_DATAGEN_SYNTH_H_
#define VHFL_DATAGEN_SYNTH_H_

#include <cstdint>
#include <functional>

#include "vhfl/datagen/dataset.h"

namespace vhfl::datagen {

enum class ClientWeighting { kProportional, kUniform };

struct SynthConfig {
  int num_clients = 10;
  int samples_per_client = 200;
  int d_local = 4;
  int d_global = 4;
  int d_label = 1;
  double noise_std = 0.1;
  double global_strength = 0.8;  // in [0, 1]
  double noniid_shift = 0.0;     // client mean offset along a random direction
  // Fraction of each client's samples drawn from the unshifted distribution.
  double public_fraction = 0.0;
  ClientWeighting weighting = ClientWeighting::kProportional;
  std::uint64_t seed = 1;

  // Throws ValidationError.
  void Validate() const;
};

// The two fixed label maps a seed draws: y depends on x_local through
// `local` and on x_global through `global`.
struct LabelMaps {
  std::function<Vector(const Vector&)> local;
  std::function<Vector(const Vector&)> global;
};
LabelMaps DrawLabelMaps(const SynthConfig& config);

// Labels are y = g(x_local) + global_strength * h(x_global) + noise, with g
// and h fixed one-hidden-layer tanh maps drawn from the seed, standardized
// with the pooled training mean and deviation. Each client keeps 80% of its
// ids for training.
FederationDataset Generate(const SynthConfig& config);

}  // namespace vhfl::datagen

#endif  // VHFL_DATAGEN_SYNTH_H_
