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

#include "vhfl/datagen/dataset_io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::datagen {
namespace fs = std::filesystem;
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

template <typename T>
T ParseNumber(const std::string& s, const fs::path& file, int line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ValidationError(fmt::format("{}:{}: bad number '{}'", file.string(), line, s));
  return v;
}

std::ofstream OpenOut(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

// Rows of a csv file after its header. Lines starting with '#' are skipped.
std::vector<std::vector<std::string>> ReadRows(const fs::path& p, std::size_t columns) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cells = SplitCsv(line);
    if (cells.size() != columns)
      throw ValidationError(fmt::format("{}:{}: expected {} columns, got {}", p.string(), line_no,
                                        columns, cells.size()));
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

void WriteSamples(const ClientData& c, int d_local, int d_label, const fs::path& p) {
  auto out = OpenOut(p);
  out << "id";
  for (int i = 0; i < d_local; ++i) out << ",xl" << i;
  for (int i = 0; i < d_label; ++i) out << ",y" << i;
  out << '\n';
  for (const auto& s : c.samples) {
    out << s.id;
    for (int i = 0; i < d_local; ++i) out << fmt::format(",{:.17g}", s.x_local(i));
    for (int i = 0; i < d_label; ++i) out << fmt::format(",{:.17g}", s.y(i));
    out << '\n';
  }
}

ClientData ReadSamples(int client_id, double q, int d_local, int d_label, const fs::path& p) {
  ClientData c{client_id, {}, q};
  int line = 1;
  for (const auto& row : ReadRows(p, 1 + d_local + d_label)) {
    ++line;
    SampleRecord s;
    s.id = ParseNumber<std::int64_t>(row[0], p, line);
    s.x_local.resize(d_local);
    s.y.resize(d_label);
    for (int i = 0; i < d_local; ++i) s.x_local(i) = ParseNumber<double>(row[1 + i], p, line);
    for (int i = 0; i < d_label; ++i)
      s.y(i) = ParseNumber<double>(row[1 + d_local + i], p, line);
    c.samples.push_back(std::move(s));
  }
  return c;
}

std::string ClientFile(int id, const char* split) {
  return fmt::format("client_{}_{}.csv", id, split);
}

}  // namespace

void WriteDataset(const FederationDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = OpenOut(dir / "manifest.csv");
    out << fmt::format("# d_local={} d_global={} d_label={}\n", data.d_local, data.d_global,
                       data.d_label);
    out << "client_id,q\n";
    for (const auto& c : data.train) out << fmt::format("{},{:.17g}\n", c.client_id, c.q);
  }
  for (std::size_t j = 0; j < data.train.size(); ++j) {
    WriteSamples(data.train[j], data.d_local, data.d_label,
                 dir / ClientFile(data.train[j].client_id, "train"));
    WriteSamples(data.test[j], data.d_local, data.d_label,
                 dir / ClientFile(data.test[j].client_id, "test"));
  }
  auto out = OpenOut(dir / "global.csv");
  out << "id";
  for (int i = 0; i < data.d_global; ++i) out << ",xg" << i;
  out << '\n';
  for (std::int64_t id : data.global.SortedIds()) {
    out << id;
    const Vector& x = data.global.At(id);
    for (int i = 0; i < data.d_global; ++i) out << fmt::format(",{:.17g}", x(i));
    out << '\n';
  }
}

FederationDataset ReadDataset(const fs::path& dir) {
  FederationDataset data;
  {
    std::ifstream in(dir / "manifest.csv");
    if (!in) throw std::runtime_error("cannot read " + (dir / "manifest.csv").string());
    std::string first;
    std::getline(in, first);
    if (std::sscanf(first.c_str(), "# d_local=%d d_global=%d d_label=%d", &data.d_local,
                    &data.d_global, &data.d_label) != 3)
      throw ValidationError("manifest.csv:1: missing dimension comment");
  }
  const fs::path manifest = dir / "manifest.csv";
  int line = 2;
  for (const auto& row : ReadRows(manifest, 2)) {
    ++line;
    const int id = ParseNumber<int>(row[0], manifest, line);
    const double q = ParseNumber<double>(row[1], manifest, line);
    data.train.push_back(
        ReadSamples(id, q, data.d_local, data.d_label, dir / ClientFile(id, "train")));
    data.test.push_back(
        ReadSamples(id, q, data.d_local, data.d_label, dir / ClientFile(id, "test")));
  }
  data.global = GlobalStore(data.d_global);
  const fs::path global = dir / "global.csv";
  line = 1;
  for (const auto& row : ReadRows(global, 1 + data.d_global)) {
    ++line;
    Vector x(data.d_global);
    for (int i = 0; i < data.d_global; ++i) x(i) = ParseNumber<double>(row[1 + i], global, line);
    data.global.Insert(ParseNumber<std::int64_t>(row[0], global, line), std::move(x));
  }
  data.Validate();
  return data;
}

}  // namespace vhfl::datagen
