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

#ifndef VHFL_DATAGEN_DATASET_H_
#define VHFL_DATAGEN_DATASET_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "vhfl/nnet/dense_net.h"

namespace vhfl::datagen {

using nnet::Matrix;
using nnet::Vector;

struct SampleRecord {
  std::int64_t id = 0;
  Vector x_local;
  Vector y;
};

// id -> feature row. Holds the center's global features, and also the
// per-client tables of processed central outputs.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  bool Contains(std::int64_t id) const { return rows_.count(id) > 0; }

  // Throws ShapeError on a dimension mismatch.
  void Insert(std::int64_t id, Vector row);
  // Throws MissingFeatureError.
  const Vector& At(std::int64_t id) const;
  // Stacks the rows of `ids` into a matrix, in order.
  Matrix Gather(std::span<const std::int64_t> ids) const;
  std::vector<std::int64_t> SortedIds() const;

 private:
  int dim_ = 0;
  std::unordered_map<std::int64_t, Vector> rows_;
};

using GlobalStore = FeatureTable;

struct ClientData {
  int client_id = 0;
  std::vector<SampleRecord> samples;
  double q = 0.0;  // aggregation weight; the weights sum to 1
};

struct FederationDataset {
  int d_local = 0;
  int d_global = 0;
  int d_label = 0;
  std::vector<ClientData> train;
  std::vector<ClientData> test;  // same clients, same order, held-out ids
  GlobalStore global;

  std::size_t num_clients() const { return train.size(); }
  // Throws ValidationError when an invariant is broken: weights not summing
  // to one, overlapping id spaces, missing global rows, bad dimensions.
  void Validate() const;
};

// Concatenation of every client's samples for one split, in client order.
std::vector<SampleRecord> Pool(std::span<const ClientData> clients);

}  // namespace vhfl::datagen

#endif  // VHFL_DATAGEN_DATASET_H_
