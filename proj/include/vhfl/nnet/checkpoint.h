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

#ifndef VHFL_NNET_CHECKPOINT_H_
#define VHFL_NNET_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "vhfl/nnet/dense_net.h"

namespace vhfl::nnet {

// Text checkpoint:
//
//   densenet 1
//   layers <n>
//   layer <i> in <in_dim> out <out_dim> activation <tag>
//   <out_dim lines of in_dim weights, row-major>
//   bias <out_dim values>
//
// Values use 17 significant digits, so a round trip is bit-exact. Lines
// starting with '#' are ignored on read.
std::string ToCheckpoint(const DenseNet& net);
// Throws ValidationError with a line number on malformed input.
DenseNet FromCheckpoint(std::string_view text);

void SaveCheckpoint(const DenseNet& net, const std::filesystem::path& path);
DenseNet LoadCheckpoint(const std::filesystem::path& path);

}  // namespace vhfl::nnet

#endif  // VHFL_NNET_CHECKPOINT_H_
