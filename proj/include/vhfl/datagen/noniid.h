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

#ifndef VHFL_DATAGEN_NONIID_H_
#define VHFL_DATAGEN_NONIID_H_

#include <optional>
#include <span>

#include "vhfl/datagen/dataset.h"

namespace vhfl::datagen {

// Gradient-divergence ratio sum_j q_j |g_j|^2 / |sum_j q_j g_j|^2, which is
// >= 1 and equals 1 when every client sees the same gradient. Returns
// nullopt ("unbounded") when the aggregate gradient vanishes.
// Throws ValidationError on length mismatch, empty input or weights that do
// not sum to one.
std::optional<double> EstimateLambda(std::span<const Vector> gradients,
                                     std::span<const double> q);

}  // namespace vhfl::datagen

#endif  // VHFL_DATAGEN_NONIID_H_
