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

#ifndef VHFL_HARNESS_OUTPUT_H_
#define VHFL_HARNESS_OUTPUT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace vhfl::harness {

// Name of the marker file that identifies a directory written by this tool.
inline constexpr char kMarkerFile[] = ".vhfl-lab";

// "# config_hash: 0x<16 hex digits>\n"
std::string HashComment(std::uint64_t hash);

// Writes `content` to `path`, creating parent directories. Throws
// std::runtime_error on I/O failure.
void WriteTextFile(const std::filesystem::path& path, std::string_view content);

// Collects a run's files in a private staging directory next to the target
// and moves them into place on Commit(). Dropping it uncommitted deletes the
// staging directory, so a failed run leaves nothing behind. An existing
// target is replaced only when it carries the marker file.
class StagedOutput {
 public:
  // Throws std::runtime_error when the target exists and is not ours.
  explicit StagedOutput(std::filesystem::path target);
  ~StagedOutput();
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  const std::filesystem::path& dir() const { return staging_; }
  void Commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

}  // namespace vhfl::harness

#endif  // VHFL_HARNESS_OUTPUT_H_
