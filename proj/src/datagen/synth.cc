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

#include "vhfl/datagen/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "vhfl/errors.h"
#include "vhfl/random.h"

namespace vhfl::datagen {
namespace {

constexpr int kMapHidden = 16;
constexpr double kTrainFraction = 0.8;

// x -> V tanh(U x + c)
struct SmoothMap {
  Matrix u;
  Vector c;
  Matrix v;

  Vector operator()(const Vector& x) const {
    return v * (u * x + c).array().tanh().matrix();
  }
};

SmoothMap DrawMap(int in_dim, int out_dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  SmoothMap m;
  m.u.resize(kMapHidden, in_dim);
  m.c.resize(kMapHidden);
  m.v.resize(out_dim, kMapHidden);
  const double su = 1.0 / std::sqrt(static_cast<double>(in_dim));
  const double sv = std::sqrt(2.0 / kMapHidden);
  for (Eigen::Index i = 0; i < m.u.size(); ++i) m.u.data()[i] = su * n(rng);
  for (Eigen::Index i = 0; i < m.c.size(); ++i) m.c.data()[i] = 0.5 * n(rng);
  for (Eigen::Index i = 0; i < m.v.size(); ++i) m.v.data()[i] = sv * n(rng);
  return m;
}

Vector Gaussian(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = n(rng);
  return x;
}

}  // namespace

void FeatureTable::Insert(std::int64_t id, Vector row) {
  if (row.size() != dim_) {
    throw ShapeError(fmt::format("feature row for id {} has {} entries, table dim is {}", id,
                                 row.size(), dim_));
  }
  rows_[id] = std::move(row);
}

const Vector& FeatureTable::At(std::int64_t id) const {
  auto it = rows_.find(id);
  if (it == rows_.end()) throw MissingFeatureError(fmt::format("no feature row for id {}", id));
  return it->second;
}

Matrix FeatureTable::Gather(std::span<const std::int64_t> ids) const {
  Matrix m(static_cast<Eigen::Index>(ids.size()), dim_);
  for (std::size_t r = 0; r < ids.size(); ++r) m.row(r) = At(ids[r]).transpose();
  return m;
}

std::vector<std::int64_t> FeatureTable::SortedIds() const {
  std::vector<std::int64_t> ids;
  ids.reserve(rows_.size());
  for (const auto& [id, row] : rows_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void FederationDataset::Validate() const {
  if (d_local < 1 || d_global < 1 || d_label < 1)
    throw ValidationError("dataset dimensions must be >= 1");
  if (train.empty()) throw ValidationError("dataset has no clients");
  if (test.size() != train.size()) throw ValidationError("train and test client lists differ");
  double q_sum = 0.0;
  std::unordered_set<std::int64_t> seen;
  for (std::size_t j = 0; j < train.size(); ++j) {
    if (!(train[j].q > 0.0)) throw ValidationError(fmt::format("client {} has q <= 0", j));
    if (test[j].client_id != train[j].client_id)
      throw ValidationError("train and test client order differs");
    q_sum += train[j].q;
    for (const ClientData* split : {&train[j], &test[j]}) {
      for (const auto& s : split->samples) {
        if (!seen.insert(s.id).second)
          throw ValidationError(fmt::format("sample id {} appears twice", s.id));
        if (s.x_local.size() != d_local || s.y.size() != d_label)
          throw ValidationError(fmt::format("sample id {} has wrong dimensions", s.id));
        if (!s.x_local.allFinite() || !s.y.allFinite())
          throw ValidationError(fmt::format("sample id {} is not finite", s.id));
        if (!global.Contains(s.id))
          throw ValidationError(fmt::format("global store lacks id {}", s.id));
      }
    }
  }
  if (std::abs(q_sum - 1.0) > 1e-12)
    throw ValidationError(fmt::format("client weights sum to {}, not 1", q_sum));
  if (global.dim() != d_global) throw ValidationError("global store dimension mismatch");
}

std::vector<SampleRecord> Pool(std::span<const ClientData> clients) {
  std::vector<SampleRecord> out;
  for (const auto& c : clients) out.insert(out.end(), c.samples.begin(), c.samples.end());
  return out;
}

void SynthConfig::Validate() const {
  if (num_clients < 1) throw ValidationError("num_clients must be >= 1");
  if (samples_per_client < 2) throw ValidationError("samples_per_client must be >= 2");
  if (d_local < 1 || d_global < 1 || d_label < 1)
    throw ValidationError("feature and label dimensions must be >= 1");
  if (!(noise_std >= 0.0)) throw ValidationError("noise_std must be >= 0");
  if (!(global_strength >= 0.0 && global_strength <= 1.0))
    throw ValidationError("global_strength must lie in [0, 1]");
  if (!(noniid_shift >= 0.0)) throw ValidationError("noniid_shift must be >= 0");
  if (!(public_fraction >= 0.0 && public_fraction <= 1.0))
    throw ValidationError("public_fraction must lie in [0, 1]");
}

LabelMaps DrawLabelMaps(const SynthConfig& config) {
  config.Validate();
  Rng map_rng = MakeRng(config.seed, StreamTag::kDataMaps);
  SmoothMap local = DrawMap(config.d_local, config.d_label, map_rng);
  SmoothMap global = DrawMap(config.d_global, config.d_label, map_rng);
  return {std::move(local), std::move(global)};
}

FederationDataset Generate(const SynthConfig& config) {
  const LabelMaps maps = DrawLabelMaps(config);
  const auto& local_map = maps.local;
  const auto& global_map = maps.global;

  FederationDataset data;
  data.d_local = config.d_local;
  data.d_global = config.d_global;
  data.d_label = config.d_label;
  data.global = GlobalStore(config.d_global);

  const int n = config.samples_per_client;
  const int n_train = std::clamp(static_cast<int>(std::lround(kTrainFraction * n)), 1, n - 1);
  const int n_public = static_cast<int>(std::lround(config.public_fraction * n));
  std::normal_distribution<double> noise(0.0, 1.0);

  for (int j = 0; j < config.num_clients; ++j) {
    Rng rng = MakeRng(config.seed, StreamTag::kDataSamples, {static_cast<std::uint64_t>(j)});
    Vector direction = Gaussian(config.d_local, rng);
    direction /= direction.norm();
    const Vector shift = config.noniid_shift * direction;

    std::vector<SampleRecord> samples;
    samples.reserve(n);
    for (int i = 0; i < n; ++i) {
      SampleRecord s;
      s.id = static_cast<std::int64_t>(j) * n + i;
      s.x_local = Gaussian(config.d_local, rng);
      if (i >= n_public) s.x_local += shift;
      Vector x_global = Gaussian(config.d_global, rng);
      s.y = local_map(s.x_local) + config.global_strength * global_map(x_global);
      for (int d = 0; d < config.d_label; ++d) s.y(d) += config.noise_std * noise(rng);
      data.global.Insert(s.id, std::move(x_global));
      samples.push_back(std::move(s));
    }

    Rng split_rng = MakeRng(config.seed, StreamTag::kDataSplit, {static_cast<std::uint64_t>(j)});
    std::shuffle(samples.begin(), samples.end(), split_rng);
    ClientData train{j, {}, 0.0};
    ClientData test{j, {}, 0.0};
    train.samples.assign(std::make_move_iterator(samples.begin()),
                         std::make_move_iterator(samples.begin() + n_train));
    test.samples.assign(std::make_move_iterator(samples.begin() + n_train),
                        std::make_move_iterator(samples.end()));
    auto by_id = [](const SampleRecord& a, const SampleRecord& b) { return a.id < b.id; };
    std::sort(train.samples.begin(), train.samples.end(), by_id);
    std::sort(test.samples.begin(), test.samples.end(), by_id);
    data.train.push_back(std::move(train));
    data.test.push_back(std::move(test));
  }

  // Standardize labels with pooled training statistics.
  Vector mean = Vector::Zero(config.d_label);
  Vector sq = Vector::Zero(config.d_label);
  double count = 0.0;
  for (const auto& c : data.train) {
    for (const auto& s : c.samples) {
      mean += s.y;
      count += 1.0;
    }
  }
  mean /= count;
  for (const auto& c : data.train)
    for (const auto& s : c.samples) sq += (s.y - mean).array().square().matrix();
  Vector sd = (sq / count).array().sqrt().matrix();
  for (int d = 0; d < config.d_label; ++d)
    if (!(sd(d) > 0.0)) sd(d) = 1.0;
  for (auto* split : {&data.train, &data.test})
    for (auto& c : *split)
      for (auto& s : c.samples) s.y = ((s.y - mean).array() / sd.array()).matrix();

  double total = 0.0;
  for (const auto& c : data.train) total += static_cast<double>(c.samples.size());
  for (std::size_t j = 0; j < data.train.size(); ++j) {
    const double q = config.weighting == ClientWeighting::kUniform
                         ? 1.0 / static_cast<double>(data.train.size())
                         : static_cast<double>(data.train[j].samples.size()) / total;
    data.train[j].q = q;
    data.test[j].q = q;
  }
  return data;
}

}  // namespace vhfl::datagen
