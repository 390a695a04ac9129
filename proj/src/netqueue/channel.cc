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

#include "vhfl/netqueue/channel.h"

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::netqueue {

void ChannelModel::Validate() const {
  params.Validate();
  if (!(t_p >= 0.0)) throw ValidationError(fmt::format("deadline t_p={} < 0", t_p));
}

std::vector<std::size_t> ApplyChannel(const ChannelModel& channel, std::size_t n_uploads,
                                      std::uint64_t epoch) {
  const QueueAnalysis q = Analyze(channel.params);
  if (!(channel.t_p >= 0.0)) throw ValidationError("deadline must be >= 0");
  Rng rng = MakeRng(channel.seed, StreamTag::kChannel, {epoch});
  std::vector<std::size_t> delivered;
  for (std::size_t i = 0; i < n_uploads; ++i) {
    if (SampleSojourn(q, rng) <= channel.t_p) delivered.push_back(i);
  }
  return delivered;
}

}  // namespace vhfl::netqueue
