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

#ifndef VHFL_FEDCORE_EVALUATION_H_
#define VHFL_FEDCORE_EVALUATION_H_

#include <cstdint>
#include <span>

#include "vhfl/datagen/dataset.h"
#include "vhfl/fedcore/federation.h"

namespace vhfl::fedcore {

// y_hat for the given ids and local features. Models that use the central
// branch look up x_global for each id in `global`.
// Throws MissingFeatureError when an id has no global row, and
// ValidationError when a global-aware model gets no store.
nnet::Matrix Predict(const CenterState& center, const GlobalStore* global,
                     std::span<const std::int64_t> ids, const nnet::Matrix& x_local);

struct Metrics {
  double mse = 0.0;          // mean over samples of |y_hat - y|^2
  double error_ratio = 0.0;  // mean of |y_hat - y| / max(|y|, 1e-8)
};

// Throws ValidationError for an empty sample set.
Metrics Evaluate(const CenterState& center, const GlobalStore* global,
                 std::span<const datagen::SampleRecord> samples);

}  // namespace vhfl::fedcore

#endif  // VHFL_FEDCORE_EVALUATION_H_
