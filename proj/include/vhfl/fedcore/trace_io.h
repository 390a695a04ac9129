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

#ifndef VHFL_FEDCORE_TRACE_IO_H_
#define VHFL_FEDCORE_TRACE_IO_H_

#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "vhfl/fedcore/runners.h"

namespace vhfl::fedcore {

// Column header, without trailing newline:
// epoch,mode,train_mse,test_mse,test_error_ratio,k_received,seed
extern const char kTraceCsvHeader[];

// Writes the header and one row per epoch of every trace. Reals use the
// shortest round-trip form, so equal traces give equal bytes.
void WriteTraceCsv(std::ostream& out, std::span<const TrainingTrace> traces);

// Inverse of WriteTraceCsv; lines starting with '#' are skipped. Rows are
// grouped into traces by consecutive (mode, seed). Wall-clock and carry
// flags are not stored and read back as zero.
// Throws ValidationError with the 1-based line number on malformed input.
std::vector<TrainingTrace> ReadTraceCsv(std::istream& in);

}  // namespace vhfl::fedcore

#endif  // VHFL_FEDCORE_TRACE_IO_H_
