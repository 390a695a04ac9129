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

#ifndef VHFL_NETQUEUE_CHANNEL_H_
#define VHFL_NETQUEUE_CHANNEL_H_

#include <cstdint>
#include <vector>

#include "vhfl/netqueue/he2_queue.h"

namespace vhfl::netqueue {

// Lossy upload path: an upload whose sojourn time exceeds the collection
// deadline t_p is lost.
struct ChannelModel {
  He2Params params;
  double t_p = 1.0;  // may be +infinity
  std::uint64_t seed = 1;

  void Validate() const;
};

// Indices in [0, n_uploads) of the uploads that arrive by the deadline in
// global epoch `epoch`. Per-upload delays are i.i.d. stationary sojourn
// draws from a stream keyed by (seed, epoch).
std::vector<std::size_t> ApplyChannel(const ChannelModel& channel, std::size_t n_uploads,
                                      std::uint64_t epoch);

}  // namespace vhfl::netqueue

#endif  // VHFL_NETQUEUE_CHANNEL_H_
