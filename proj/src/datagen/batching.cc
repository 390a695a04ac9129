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

#include "vhfl/datagen/batching.h"

#include <algorithm>
#include <numeric>

#include "vhfl/errors.h"

namespace vhfl::datagen {
namespace {

Batch Assemble(std::span<const SampleRecord> samples, std::span<const std::size_t> order,
               const FeatureTable* side) {
  Batch b;
  const auto rows = static_cast<Eigen::Index>(order.size());
  const auto& first = samples[order.front()];
  b.x_local.resize(rows, first.x_local.size());
  b.y.resize(rows, first.y.size());
  b.ids.reserve(order.size());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const SampleRecord& s = samples[order[r]];
    b.ids.push_back(s.id);
    b.x_local.row(r) = s.x_local.transpose();
    b.y.row(r) = s.y.transpose();
  }
  b.side = side ? side->Gather(b.ids) : Matrix(rows, 0);
  return b;
}

}  // namespace

std::vector<Batch> MakeBatches(std::span<const SampleRecord> samples, const FeatureTable* side,
                               int batch_size, Rng& rng) {
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Batch> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t len = std::min<std::size_t>(batch_size, order.size() - start);
    batches.push_back(Assemble(samples, std::span(order).subspan(start, len), side));
  }
  return batches;
}

std::vector<Batch> MakeBatches(std::span<const SampleRecord> samples, const FeatureTable* side,
                               int batch_size, std::uint64_t seed) {
  Rng rng(seed);
  return MakeBatches(samples, side, batch_size, rng);
}

Batch FullBatch(std::span<const SampleRecord> samples, const FeatureTable* side) {
  if (samples.empty()) throw ValidationError("full batch of an empty sample set");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return Assemble(samples, order, side);
}

}  // namespace vhfl::datagen
