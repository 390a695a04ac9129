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

#include "vhfl/harness/output.h"

#include <atomic>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <fmt/format.h>
#include <unistd.h>

namespace vhfl::harness {

namespace fs = std::filesystem;

namespace {

void CheckReplaceable(const fs::path& target) {
  if (!fs::exists(target)) return;
  if (!fs::is_directory(target) || !fs::exists(target / kMarkerFile)) {
    throw std::runtime_error(fmt::format(
        "refusing to overwrite {}: it exists and was not written by vhfl-lab", target.string()));
  }
}

}  // namespace

std::string HashComment(std::uint64_t hash) {
  return fmt::format("# config_hash: 0x{:016x}\n", hash);
}

void WriteTextFile(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

StagedOutput::StagedOutput(fs::path target) : target_(std::move(target)) {
  if (target_.empty()) throw std::runtime_error("empty output directory");
  target_ = fs::absolute(target_).lexically_normal();
  if (target_.filename().empty()) target_ = target_.parent_path();
  CheckReplaceable(target_);
  static std::atomic<int> counter{0};
  staging_ = target_.parent_path() /
             fmt::format(".{}.staging-{}-{}", target_.filename().string(), ::getpid(), counter++);
  fs::remove_all(staging_);
  fs::create_directories(staging_);
  WriteTextFile(staging_ / kMarkerFile, "");
}

StagedOutput::~StagedOutput() {
  if (committed_) return;
  std::error_code ec;
  fs::remove_all(staging_, ec);
}

void StagedOutput::Commit() {
  CheckReplaceable(target_);
  if (fs::exists(target_)) fs::remove_all(target_);
  fs::rename(staging_, target_);
  committed_ = true;
}

}  // namespace vhfl::harness
