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

#include "vhfl/fedcore/config.h"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::fedcore {
namespace {

void Require(bool ok, std::string_view field, std::string_view rule) {
  if (!ok) throw ValidationError(fmt::format("{}: {}", field, rule));
}

void ValidateHidden(const std::vector<int>& hidden, std::string_view field) {
  for (int h : hidden) Require(h >= 1, field, "hidden widths must be >= 1");
}

}  // namespace

double Schedule::At(std::int64_t t) const {
  if (kind == Kind::kConstant) return value;
  return value / (static_cast<double>(t) + t0);
}

void Schedule::Validate(double cap, std::string_view name) const {
  Require(std::isfinite(value) && value > 0.0, name, "step size must be finite and > 0");
  if (kind == Kind::kInverseTime) {
    Require(std::isfinite(t0) && t0 > 0.0, name, "t0 must be finite and > 0");
    // The largest value is at t = 0.
    Require(value / t0 <= cap, name,
            fmt::format("c / t0 = {} exceeds the learning-rate cap {}", value / t0, cap));
  } else {
    Require(value <= cap, name, fmt::format("{} exceeds the learning-rate cap {}", value, cap));
  }
}

std::string_view CombinerName(Combiner c) {
  return c == Combiner::kConcat ? "concat" : "additive";
}

Combiner ParseCombiner(std::string_view name) {
  if (name == "concat") return Combiner::kConcat;
  if (name == "additive") return Combiner::kAdditive;
  throw ValidationError(fmt::format("unknown combiner '{}' (expected concat or additive)", name));
}

std::string_view AggregationName(AggregationRule r) {
  return r == AggregationRule::kRenormalized ? "renormalized" : "unbiased";
}

AggregationRule ParseAggregation(std::string_view name) {
  if (name == "renormalized") return AggregationRule::kRenormalized;
  if (name == "unbiased") return AggregationRule::kUnbiased;
  throw ValidationError(
      fmt::format("unknown aggregation '{}' (expected renormalized or unbiased)", name));
}

void FederationConfig::Validate() const {
  Require(N >= 1, "N", "must be >= 1");
  Require(K >= 1 && K <= N, "K", fmt::format("must satisfy 1 <= K <= N (K={}, N={})", K, N));
  Require(E_l >= 1, "E_l", "must be >= 1");
  Require(B >= 1, "B", "must be >= 1");
  Require(T_g >= 1, "T_g", "must be >= 1");
  Require(std::isfinite(max_learning_rate) && max_learning_rate > 0.0, "max_learning_rate",
          "must be finite and > 0");
  eta.Validate(max_learning_rate, "eta");
  eta0.Validate(max_learning_rate, "eta0");
  Require(workers >= 1, "workers", "must be >= 1");
  Require(model.u0_dim >= 1, "model.u0_dim", "must be >= 1");
  ValidateHidden(model.global_hidden, "model.global_hidden");
  ValidateHidden(model.local_hidden, "model.local_hidden");
  if (deadline_channel) deadline_channel->Validate();
}

nnet::Architecture GlobalArchitecture(const ModelConfig& m, int d_global) {
  nnet::Architecture a;
  a.in_dim = d_global;
  a.hidden = m.global_hidden;
  a.out_dim = m.u0_dim;
  a.hidden_activation = m.hidden_activation;
  return a;
}

nnet::Architecture LocalArchitecture(const ModelConfig& m, int d_local, int d_label,
                                     bool use_global) {
  nnet::Architecture a;
  a.in_dim = d_local + (use_global && m.combiner == Combiner::kConcat ? m.u0_dim : 0);
  a.hidden = m.local_hidden;
  a.out_dim = d_label;
  a.hidden_activation = m.hidden_activation;
  return a;
}

}  // namespace vhfl::fedcore
