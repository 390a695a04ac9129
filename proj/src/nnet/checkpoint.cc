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

#include "vhfl/nnet/checkpoint.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::nnet {
namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-blank, non-comment line split on whitespace. Throws at end of
  // input.
  std::vector<std::string_view> Next() {
    while (pos_ <= text_.size()) {
      const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      std::vector<std::string_view> tokens;
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
      }
      if (!tokens.empty() && tokens.front().front() != '#') return tokens;
    }
    Fail("unexpected end of checkpoint");
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ValidationError(fmt::format("checkpoint line {}: {}", line_no_, what));
  }

  double ParseDouble(std::string_view tok) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      Fail(fmt::format("bad number '{}'", tok));
    }
    return v;
  }

  int ParseInt(std::string_view tok) const {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      Fail(fmt::format("bad integer '{}'", tok));
    }
    return v;
  }

  void Expect(const std::vector<std::string_view>& toks, std::size_t i,
              std::string_view word) const {
    if (i >= toks.size() || toks[i] != word) Fail(fmt::format("expected '{}'", word));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

}  // namespace

std::string ToCheckpoint(const DenseNet& net) {
  std::string out = fmt::format("densenet 1\nlayers {}\n", net.num_layers());
  for (std::size_t i = 0; i < net.num_layers(); ++i) {
    const DenseLayer& l = net.layers()[i];
    out += fmt::format("layer {} in {} out {} activation {}\n", i, l.in_dim(), l.out_dim(),
                       ActivationName(l.activation));
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) {
        if (c > 0) out += ' ';
        out += fmt::format("{:.17g}", l.weights(r, c));
      }
      out += '\n';
    }
    out += "bias";
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out += fmt::format(" {:.17g}", l.bias(r));
    out += '\n';
  }
  return out;
}

DenseNet FromCheckpoint(std::string_view text) {
  LineReader reader(text);
  auto toks = reader.Next();
  reader.Expect(toks, 0, "densenet");
  if (toks.size() != 2 || toks[1] != "1") reader.Fail("unsupported checkpoint version");
  toks = reader.Next();
  reader.Expect(toks, 0, "layers");
  if (toks.size() != 2) reader.Fail("expected 'layers <n>'");
  const int n_layers = reader.ParseInt(toks[1]);
  if (n_layers < 1) reader.Fail("layer count must be >= 1");

  std::vector<DenseLayer> layers;
  for (int i = 0; i < n_layers; ++i) {
    toks = reader.Next();
    if (toks.size() != 8) reader.Fail("expected 'layer <i> in <n> out <m> activation <tag>'");
    reader.Expect(toks, 0, "layer");
    if (reader.ParseInt(toks[1]) != i) reader.Fail("layer index out of order");
    reader.Expect(toks, 2, "in");
    reader.Expect(toks, 4, "out");
    reader.Expect(toks, 6, "activation");
    const int in = reader.ParseInt(toks[3]);
    const int out = reader.ParseInt(toks[5]);
    if (in < 1 || out < 1) reader.Fail("dimensions must be >= 1");
    DenseLayer layer;
    try {
      layer.activation = ParseActivation(toks[7]);
    } catch (const ValidationError& e) {
      reader.Fail(e.what());
    }
    layer.weights.resize(out, in);
    for (int r = 0; r < out; ++r) {
      toks = reader.Next();
      if (static_cast<int>(toks.size()) != in) {
        reader.Fail(fmt::format("weight row has {} values, expected {}", toks.size(), in));
      }
      for (int c = 0; c < in; ++c) layer.weights(r, c) = reader.ParseDouble(toks[c]);
    }
    toks = reader.Next();
    reader.Expect(toks, 0, "bias");
    if (static_cast<int>(toks.size()) != out + 1) reader.Fail("bias row has wrong length");
    layer.bias.resize(out);
    for (int r = 0; r < out; ++r) layer.bias(r) = reader.ParseDouble(toks[r + 1]);
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

void SaveCheckpoint(const DenseNet& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << ToCheckpoint(net);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

DenseNet LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return FromCheckpoint(ss.str());
}

}  // namespace vhfl::nnet
