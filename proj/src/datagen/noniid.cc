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

#include "vhfl/datagen/noniid.h"

#include <cmath>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::datagen {

std::optional<double> EstimateLambda(std::span<const Vector> gradients,
                                     std::span<const double> q) {
  if (gradients.empty()) throw ValidationError("lambda: no gradients");
  if (gradients.size() != q.size())
    throw ValidationError(fmt::format("lambda: {} gradients but {} weights", gradients.size(),
                                      q.size()));
  double q_sum = 0.0;
  for (double w : q) q_sum += w;
  if (std::abs(q_sum - 1.0) > 1e-9)
    throw ValidationError(fmt::format("lambda: weights sum to {}, not 1", q_sum));

  const Eigen::Index dim = gradients.front().size();
  Vector aggregate = Vector::Zero(dim);
  double numerator = 0.0;
  for (std::size_t j = 0; j < gradients.size(); ++j) {
    if (gradients[j].size() != dim) throw ShapeError("lambda: gradient dimensions differ");
    numerator += q[j] * gradients[j].squaredNorm();
    aggregate += q[j] * gradients[j];
  }
  const double denominator = aggregate.squaredNorm();
  // A cancellation down to rounding noise is a vanishing aggregate.
  if (!(denominator > 1e-24 * numerator) || denominator == 0.0) return std::nullopt;
  return numerator / denominator;
}

}  // namespace vhfl::datagen
