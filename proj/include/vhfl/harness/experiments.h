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

#ifndef VHFL_HARNESS_EXPERIMENTS_H_
#define VHFL_HARNESS_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vhfl/fedcore/runners.h"
#include "vhfl/harness/experiment_config.h"

namespace vhfl::harness {

struct ModeRun {
  fedcore::Mode mode;
  std::uint64_t seed = 0;
  fedcore::RunResult result;
};

// Every (mode, seed) pair, each on the dataset generated from its seed.
// Sorted by mode order given, then seed. Runs concurrently on c.workers
// threads.
std::vector<ModeRun> RunTraining(const ExperimentConfig& c, std::span<const fedcore::Mode> modes);

// First epoch whose training MSE is at or below the threshold, or T_g + 1
// when the run never gets there.
int EpochsToThreshold(const fedcore::TrainingTrace& trace, double threshold);

struct SweepPoint {
  std::string param;  // "K" or "E_l"
  int value = 0;
  std::uint64_t seed = 0;
  int epochs_to_threshold = 0;
  bool reached = false;
  double final_train_mse = 0.0;
  double final_test_mse = 0.0;
  fedcore::TrainingTrace trace;
};

// VHFL runs over the K grid (fractions of N, rounded, at least 1, repeats
// dropped) and over the E_l grid, for every seed.
std::vector<SweepPoint> RunKElSweep(const ExperimentConfig& c);

struct SweepSummary {
  std::string param;
  int value = 0;
  int runs = 0;
  double mean_epochs_to_threshold = 0.0;  // unreached runs count as T_g + 1
  int unreached = 0;
  double mean_final_train_mse = 0.0;
};

std::vector<SweepSummary> SummarizeSweep(std::span<const SweepPoint> points);

// Runs the configured mode and writes its files into `dir`.
void WriteExperiment(const ExperimentConfig& c, const std::filesystem::path& dir);

// Stages, writes and commits into c.output_dir.
void RunExperiment(const ExperimentConfig& c);

// Command-line entry point: vhfl-lab <mode> --config <path> [--seed S]
// [--out DIR]. Returns 0 on success, 2 on a configuration error and 3 on a
// runtime error.
int RunCli(int argc, const char* const* argv);

}  // namespace vhfl::harness

#endif  // VHFL_HARNESS_EXPERIMENTS_H_
