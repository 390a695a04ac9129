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

#ifndef VHFL_DATAGEN_BATCHING_H_
#define VHFL_DATAGEN_BATCHING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vhfl/datagen/dataset.h"
#include "vhfl/random.h"

namespace vhfl::datagen {

struct Batch {
  std::vector<std::int64_t> ids;
  Matrix x_local;
  Matrix side;  // rows of the side table (x_global or u0); 0 columns if none
  Matrix y;
};

// Shuffles the samples with `rng` and cuts them into batches of
// `batch_size`; the last batch may be short. Rows of every matrix in a batch
// belong to the same id. `side` may be null.
// Throws ValidationError for batch_size < 1 and MissingFeatureError when the
// side table lacks an id.
std::vector<Batch> MakeBatches(std::span<const SampleRecord> samples, const FeatureTable* side,
                               int batch_size, Rng& rng);
std::vector<Batch> MakeBatches(std::span<const SampleRecord> samples, const FeatureTable* side,
                               int batch_size, std::uint64_t seed);

// One batch with every sample, in the given order.
Batch FullBatch(std::span<const SampleRecord> samples, const FeatureTable* side);

}  // namespace vhfl::datagen

#endif  // VHFL_DATAGEN_BATCHING_H_
