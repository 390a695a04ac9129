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

#ifndef VHFL_RANDOM_H_
#define VHFL_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vhfl {

using Rng = std::mt19937_64;

// Tags separating the independent random streams of one run.
enum class StreamTag : std::uint64_t {
  kInitGlobalModel = 1,
  kInitLocalModel = 2,
  kClientSelection = 3,
  kBatchOrder = 4,
  kChannel = 5,
  kDataMaps = 6,
  kDataSamples = 7,
  kDataSplit = 8,
  kQueueSimulation = 9,
};

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a base seed, a stream tag and any number of indices (client id,
// epoch...) into one seed. Distinct inputs give statistically unrelated
// streams, so per-client work is independent of scheduling order.
inline std::uint64_t DeriveSeed(std::uint64_t base, StreamTag tag,
                                std::initializer_list<std::uint64_t> parts = {}) {
  std::uint64_t h = Mix64(base ^ Mix64(static_cast<std::uint64_t>(tag)));
  for (std::uint64_t p : parts) h = Mix64(h ^ Mix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng MakeRng(std::uint64_t base, StreamTag tag,
                   std::initializer_list<std::uint64_t> parts = {}) {
  return Rng(DeriveSeed(base, tag, parts));
}

}  // namespace vhfl

#endif  // VHFL_RANDOM_H_
