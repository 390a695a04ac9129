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

#include "vhfl/fedcore/trace_io.h"

#include <charconv>
#include <string>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::fedcore {

const char kTraceCsvHeader[] = "epoch,mode,train_mse,test_mse,test_error_ratio,k_received,seed";

namespace {

std::vector<std::string_view> SplitComma(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T ParseField(std::string_view s, int line_no, std::string_view column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(
        fmt::format("trace line {}: bad value '{}' in column {}", line_no, s, column));
  }
  return v;
}

}  // namespace

void WriteTraceCsv(std::ostream& out, std::span<const TrainingTrace> traces) {
  out << kTraceCsvHeader << '\n';
  for (const TrainingTrace& t : traces) {
    for (const EpochRecord& r : t.epochs) {
      out << fmt::format("{},{},{},{},{},{},{}\n", r.epoch, t.mode, r.train_mse, r.test_mse,
                         r.test_error_ratio, r.k_received, t.seed);
    }
  }
}

std::vector<TrainingTrace> ReadTraceCsv(std::istream& in) {
  std::vector<TrainingTrace> traces;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kTraceCsvHeader) {
        throw ValidationError(fmt::format("trace line {}: unexpected header '{}'", line_no, line));
      }
      header_seen = true;
      continue;
    }
    const auto f = SplitComma(line);
    if (f.size() != 7) {
      throw ValidationError(
          fmt::format("trace line {}: expected 7 fields, found {}", line_no, f.size()));
    }
    EpochRecord r;
    r.epoch = ParseField<int>(f[0], line_no, "epoch");
    r.train_mse = ParseField<double>(f[2], line_no, "train_mse");
    r.test_mse = ParseField<double>(f[3], line_no, "test_mse");
    r.test_error_ratio = ParseField<double>(f[4], line_no, "test_error_ratio");
    r.k_received = ParseField<int>(f[5], line_no, "k_received");
    const auto seed = ParseField<std::uint64_t>(f[6], line_no, "seed");
    const std::string mode(f[1]);
    if (traces.empty() || traces.back().mode != mode || traces.back().seed != seed) {
      traces.push_back({mode, seed, {}});
    }
    traces.back().epochs.push_back(r);
  }
  if (!header_seen) throw ValidationError("trace file has no header");
  return traces;
}

}  // namespace vhfl::fedcore
