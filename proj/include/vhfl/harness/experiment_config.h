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

#ifndef VHFL_HARNESS_EXPERIMENT_CONFIG_H_
#define VHFL_HARNESS_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vhfl/bounds/convergence_bounds.h"
#include "vhfl/datagen/synth.h"
#include "vhfl/fedcore/config.h"
#include "vhfl/netqueue/he2_queue.h"

namespace vhfl::harness {

enum class ExperimentMode {
  kVhfl,
  kHfl,
  kCloud,
  kCloudLocal,
  kCompare,
  kSweep,  // K and E_l sweeps
  kQueueAnalyze,
  kQueueSimulate,
  kDelayPlan,
  kBoundsSweep,
};

std::string_view ExperimentModeName(ExperimentMode m);
// Throws ConfigError.
ExperimentMode ParseExperimentMode(std::string_view name);

// Invalid configuration. what() is "<source>:<line>: <message>" when a line
// is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Upload deadline for the federated modes: a fixed t_p, or the t_p that
// reaches a target success rate on the queue section's link.
struct ChannelSpec {
  std::optional<double> t_p;
  std::optional<double> gamma_target;
};

struct QueueSection {
  double lambda_n = 2.0;
  std::vector<double> alpha1 = {0.5};  // one analysis per value; alpha2 = 1 - alpha1
  double mu1 = 8.0;
  double mu2 = 2.0;
  std::optional<double> t_p;          // report gamma at this deadline
  std::vector<double> gamma_targets;  // report the deadline for each
  std::int64_t simulate_jobs = 1000000;
  double grid_max = 0.0;  // 0 picks a range covering gamma up to ~0.999
  int grid_points = 20;

  netqueue::He2Params Params(double a1) const;
};

struct BoundSweepSpec {
  std::string param;
  std::vector<double> values;
};

struct BoundsSection {
  bounds::BoundParams params;
  std::vector<BoundSweepSpec> sweeps;
};

struct SweepSection {
  std::vector<double> k_fractions = {0.1, 0.25, 0.5, 1.0};
  std::vector<int> el_values = {1, 5, 10, 20};
  double threshold = 0.1;  // on the pooled training MSE
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kVhfl;
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = "vhfl-out";
  int workers = 1;  // concurrent seeds / sweep points
  datagen::SynthConfig data;
  fedcore::FederationConfig federation;  // N follows data.num_clients
  std::optional<ChannelSpec> channel;
  QueueSection queue;
  BoundsSection bounds;
  SweepSection sweep;
};

// Parses a YAML document. Unknown keys, wrong types and invalid values are
// errors that name the line. `source` labels diagnostics. A mode override
// (from the command line) must agree with any mode the document names.
ExperimentConfig ParseConfig(const std::string& text, const std::string& source,
                             std::optional<ExperimentMode> mode_override = std::nullopt);
ExperimentConfig LoadConfig(const std::string& path,
                            std::optional<ExperimentMode> mode_override = std::nullopt);

// Canonical YAML for the effective configuration, every field spelled out.
// ParseConfig(EmitConfig(c)) reproduces c.
std::string EmitConfig(const ExperimentConfig& c, bool include_output_dir = true);

// FNV-1a of the canonical text without output_dir and workers, which do not
// change results.
std::uint64_t ConfigHash(const ExperimentConfig& c);

// The channel model a federated run with this seed uses, if any.
std::optional<netqueue::ChannelModel> ResolveChannel(const ExperimentConfig& c,
                                                     std::uint64_t seed);

}  // namespace vhfl::harness

#endif  // VHFL_HARNESS_EXPERIMENT_CONFIG_H_
