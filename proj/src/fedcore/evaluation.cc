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

#include "vhfl/fedcore/evaluation.h"

#include <algorithm>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::fedcore {

using nnet::Matrix;

namespace {
constexpr double kLabelFloor = 1e-8;
}  // namespace

Matrix Predict(const CenterState& center, const GlobalStore* global,
               std::span<const std::int64_t> ids, const Matrix& x_local) {
  if (static_cast<std::size_t>(x_local.rows()) != ids.size()) {
    throw ShapeError(fmt::format("{} ids for {} feature rows", ids.size(), x_local.rows()));
  }
  if (!center.uses_global()) return nnet::Predict(center.wbar, x_local);
  if (global == nullptr) throw ValidationError("model uses global features but none were given");
  const Matrix u0 = nnet::Predict(center.w0, global->Gather(ids));
  if (center.combiner == Combiner::kAdditive) return u0 + nnet::Predict(center.wbar, x_local);
  Matrix input(x_local.rows(), u0.cols() + x_local.cols());
  input << u0, x_local;
  return nnet::Predict(center.wbar, input);
}

Metrics Evaluate(const CenterState& center, const GlobalStore* global,
                 std::span<const datagen::SampleRecord> samples) {
  if (samples.empty()) throw ValidationError("cannot evaluate on an empty sample set");
  const auto n = static_cast<Eigen::Index>(samples.size());
  std::vector<std::int64_t> ids(samples.size());
  Matrix x(n, samples.front().x_local.size());
  Matrix y(n, samples.front().y.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    ids[i] = samples[i].id;
    x.row(i) = samples[i].x_local.transpose();
    y.row(i) = samples[i].y.transpose();
  }
  const Matrix pred = Predict(center, global, ids, x);
  if (pred.cols() != y.cols()) {
    throw ShapeError(fmt::format("model predicts {} outputs, labels have {}", pred.cols(),
                                 y.cols()));
  }
  Metrics m;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double err = (pred.row(i) - y.row(i)).norm();
    m.mse += err * err;
    m.error_ratio += err / std::max(y.row(i).norm(), kLabelFloor);
  }
  m.mse /= static_cast<double>(n);
  m.error_ratio /= static_cast<double>(n);
  return m;
}

}  // namespace vhfl::fedcore
