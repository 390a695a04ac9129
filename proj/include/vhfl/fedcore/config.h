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

#ifndef VHFL_FEDCORE_CONFIG_H_
#define VHFL_FEDCORE_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vhfl/netqueue/channel.h"
#include "vhfl/nnet/dense_net.h"

namespace vhfl::fedcore {

// Step size as a function of the step index t (0-based): either a constant
// or c / (t + t0).
struct Schedule {
  enum class Kind { kConstant, kInverseTime };

  Kind kind = Kind::kConstant;
  double value = 0.05;  // the constant, or c
  double t0 = 1.0;

  static Schedule Constant(double v) { return {Kind::kConstant, v, 1.0}; }
  static Schedule InverseTime(double c, double t0) { return {Kind::kInverseTime, c, t0}; }

  double At(std::int64_t t) const;
  // Every value the schedule can take must lie in (0, cap].
  void Validate(double cap, std::string_view name) const;
};

// How the processed central output u0 meets the local features.
enum class Combiner {
  kConcat,    // local net reads [u0 | x_local]
  kAdditive,  // y = u0 + local_net(x_local); needs u0_dim == d_label
};

enum class AggregationRule {
  kRenormalized,  // sum q_j w_j / sum q_j over the received uploads
  kUnbiased,      // (N / K) sum q_j w_j
};

enum class SelectionRule { kUniformWithoutReplacement };

std::string_view CombinerName(Combiner c);
Combiner ParseCombiner(std::string_view name);
std::string_view AggregationName(AggregationRule r);
AggregationRule ParseAggregation(std::string_view name);

struct ModelConfig {
  std::vector<int> global_hidden = {16};
  int u0_dim = 4;
  std::vector<int> local_hidden = {32};
  nnet::Activation hidden_activation = nnet::Activation::kTanh;
  Combiner combiner = Combiner::kConcat;
};

struct FederationConfig {
  int N = 10;
  int K = 10;
  int E_l = 5;
  int B = 32;
  int T_g = 50;
  Schedule eta = Schedule::Constant(0.05);
  Schedule eta0 = Schedule::Constant(0.02);
  std::uint64_t seed = 1;
  SelectionRule selection = SelectionRule::kUniformWithoutReplacement;
  std::optional<netqueue::ChannelModel> deadline_channel;
  AggregationRule aggregation = AggregationRule::kRenormalized;
  double max_learning_rate = 1.0;  // cap on every scheduled step size
  ModelConfig model;
  int workers = 1;  // threads for the client updates of one epoch

  // Throws ValidationError naming the offending field.
  void Validate() const;
};

// Central model: x_global -> u0.
nnet::Architecture GlobalArchitecture(const ModelConfig& m, int d_global);
// Federal model. With use_global and the concat combiner the input is
// [u0 | x_local]; otherwise it is x_local alone.
nnet::Architecture LocalArchitecture(const ModelConfig& m, int d_local, int d_label,
                                     bool use_global);

}  // namespace vhfl::fedcore

#endif  // VHFL_FEDCORE_CONFIG_H_
