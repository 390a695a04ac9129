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

#ifndef VHFL_DATAGEN_DATASET_IO_H_
#define VHFL_DATAGEN_DATASET_IO_H_

#include <filesystem>

#include "vhfl/datagen/dataset.h"

namespace vhfl::datagen {

// Writes comma-separated files into `dir`:
//   manifest.csv                 client_id,q
//   client_<j>_train.csv         id,xl0..,y0..
//   client_<j>_test.csv          id,xl0..,y0..
//   global.csv                   id,xg0..
void WriteDataset(const FederationDataset& data, const std::filesystem::path& dir);
FederationDataset ReadDataset(const std::filesystem::path& dir);

}  // namespace vhfl::datagen

#endif  // VHFL_DATAGEN_DATASET_IO_H_
