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

#include "vhfl/netqueue/simulation.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::netqueue {

std::vector<double> SimulateMg1(const He2Params& p, std::int64_t n_jobs, std::uint64_t seed) {
  if (n_jobs < 1) throw ValidationError("simulation needs at least one job");
  if (!(p.lambda_n > 0.0 && p.mu1 > 0.0 && p.mu2 > 0.0))
    throw ValidationError("simulation rates must be positive");
  if (!(p.alpha1 >= 0.0 && p.alpha2 >= 0.0) || std::abs(p.alpha1 + p.alpha2 - 1.0) > 1e-12)
    throw ValidationError("branch probabilities must be >= 0 and sum to 1");
  if (!(p.Utilization() < 1.0))
    throw ValidationError(fmt::format("unstable queue: utilization {} >= 1", p.Utilization()));

  Rng rng = MakeRng(seed, StreamTag::kQueueSimulation);
  std::exponential_distribution<double> interarrival(p.lambda_n);
  std::exponential_distribution<double> idle(p.mu1);
  std::exponential_distribution<double> busy(p.mu2);
  std::uniform_real_distribution<double> branch(0.0, 1.0);

  const std::int64_t warmup = n_jobs / 100;
  std::vector<double> sojourn;
  sojourn.reserve(static_cast<std::size_t>(n_jobs - warmup));
  double wait = 0.0;
  for (std::int64_t n = 0; n < n_jobs; ++n) {
    const double service = branch(rng) < p.alpha1 ? idle(rng) : busy(rng);
    if (n >= warmup) sojourn.push_back(wait + service);
    wait = std::max(0.0, wait + service - interarrival(rng));
  }
  return sojourn;
}

double EmpiricalGamma(std::span<const double> samples, double t_p) {
  if (!(t_p >= 0.0)) throw ValidationError("deadline must be >= 0");
  if (samples.empty()) throw ValidationError("no samples");
  const auto hits = std::count_if(samples.begin(), samples.end(),
                                  [t_p](double s) { return s <= t_p; });
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace vhfl::netqueue
