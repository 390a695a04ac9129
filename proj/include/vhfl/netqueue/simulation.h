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

#ifndef VHFL_NETQUEUE_SIMULATION_H_
#define VHFL_NETQUEUE_SIMULATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vhfl/netqueue/he2_queue.h"

namespace vhfl::netqueue {

// Sojourn times of a FIFO single-server queue with Poisson(lambda_n)
// arrivals and hyper-exponential service, via the Lindley recursion
//   w_{n+1} = max(0, w_n + s_n - a_{n+1}).
// The queue starts empty; the first 1% of jobs are dropped as warm-up.
// Requires positive rates and utilization < 1 (mu1 == mu2 is allowed).
std::vector<double> SimulateMg1(const He2Params& params, std::int64_t n_jobs,
                                std::uint64_t seed);

// Fraction of samples <= t_p.
double EmpiricalGamma(std::span<const double> samples, double t_p);

}  // namespace vhfl::netqueue

#endif  // VHFL_NETQUEUE_SIMULATION_H_
