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

#include "vhfl/harness/experiment_config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "vhfl/errors.h"

namespace vhfl::harness {
namespace {

struct ModeName {
  ExperimentMode mode;
  std::string_view name;
};

constexpr ModeName kModes[] = {
    {ExperimentMode::kVhfl, "vhfl"},
    {ExperimentMode::kHfl, "hfl"},
    {ExperimentMode::kCloud, "cloud"},
    {ExperimentMode::kCloudLocal, "cloud_local"},
    {ExperimentMode::kCompare, "compare"},
    {ExperimentMode::kSweep, "sweep"},
    {ExperimentMode::kQueueAnalyze, "queue_analyze"},
    {ExperimentMode::kQueueSimulate, "queue_simulate"},
    {ExperimentMode::kDelayPlan, "delay_plan"},
    {ExperimentMode::kBoundsSweep, "bounds_sweep"},
};

bool IsQueueMode(ExperimentMode m) {
  return m == ExperimentMode::kQueueAnalyze || m == ExperimentMode::kQueueSimulate ||
         m == ExperimentMode::kDelayPlan;
}

int LineOf(const YAML::Node& n) {
  if (!n.IsDefined()) return 0;
  const YAML::Mark m = n.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

[[noreturn]] void FailAt(const std::string& source, int line, const std::string& msg) {
  if (line > 0) throw ConfigError(fmt::format("{}:{}: {}", source, line, msg));
  throw ConfigError(fmt::format("{}: {}", source, msg));
}

// Walks one YAML mapping, converting values and remembering which keys were
// consumed so leftovers can be reported.
class Reader {
 public:
  Reader(YAML::Node node, std::string path, std::string source)
      : node_(std::move(node)), path_(std::move(path)), source_(std::move(source)) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
      Fail(node_, fmt::format("'{}' must be a mapping", path_));
    }
  }

  int line() const { return LineOf(node_); }
  const std::string& source() const { return source_; }

  [[noreturn]] void Fail(const YAML::Node& at, const std::string& msg) const {
    FailAt(source_, LineOf(at), msg);
  }
  [[noreturn]] void FailHere(const std::string& msg) const { Fail(node_, msg); }

  bool Has(const std::string& key) const { return IsMap() && node_[key]; }

  YAML::Node Raw(const std::string& key) {
    used_.insert(key);
    return IsMap() ? node_[key] : YAML::Node();
  }

  template <typename T>
  bool Read(const std::string& key, T& out) {
    if (!Has(key)) return false;
    out = Convert<T>(Raw(key), Key(key));
    return true;
  }

  template <typename T>
  bool ReadList(const std::string& key, std::vector<T>& out) {
    if (!Has(key)) return false;
    const YAML::Node n = Raw(key);
    out.clear();
    if (n.IsScalar()) {
      out.push_back(Convert<T>(n, Key(key)));
    } else if (n.IsSequence()) {
      for (std::size_t i = 0; i < n.size(); ++i) {
        out.push_back(Convert<T>(n[i], fmt::format("{}[{}]", Key(key), i)));
      }
    } else {
      Fail(n, fmt::format("'{}' must be a value or a list", Key(key)));
    }
    return true;
  }

  std::optional<Reader> Child(const std::string& key) {
    if (!Has(key)) return std::nullopt;
    return Reader(Raw(key), Key(key), source_);
  }

  // Reports the first key nothing asked for.
  void Done() const {
    if (!IsMap()) return;
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const auto key = it->first.as<std::string>();
      if (!used_.count(key)) Fail(it->first, fmt::format("unknown key '{}'", Key(key)));
    }
  }

  std::string Key(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <typename T>
  T Convert(const YAML::Node& n, const std::string& name) const {
    if (!n.IsScalar()) Fail(n, fmt::format("'{}' must be a single value", name));
    if constexpr (std::is_same_v<T, double>) {
      const std::string& s = n.Scalar();
      if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    }
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      Fail(n, fmt::format("'{}' has invalid value '{}'", name, n.Scalar()));
    }
  }

 private:
  bool IsMap() const { return node_.IsDefined() && node_.IsMap(); }

  YAML::Node node_;
  std::string path_;
  std::string source_;
  std::set<std::string> used_;
};

fedcore::Schedule ReadSchedule(Reader& parent, const std::string& key,
                               fedcore::Schedule current) {
  if (!parent.Has(key)) return current;
  const YAML::Node n = parent.Raw(key);
  if (n.IsScalar()) return fedcore::Schedule::Constant(parent.Convert<double>(n, parent.Key(key)));
  Reader r(n, parent.Key(key), parent.source());
  std::string kind = "constant";
  r.Read("schedule", kind);
  fedcore::Schedule s;
  if (kind == "constant") {
    s.kind = fedcore::Schedule::Kind::kConstant;
    if (!r.Read("value", s.value)) r.FailHere(fmt::format("'{}' needs 'value'", r.Key("value")));
  } else if (kind == "inverse_time") {
    s.kind = fedcore::Schedule::Kind::kInverseTime;
    if (!r.Read("c", s.value) || !r.Read("t0", s.t0)) {
      r.FailHere(fmt::format("'{}' with schedule inverse_time needs 'c' and 't0'", parent.Key(key)));
    }
  } else {
    r.FailHere(fmt::format("unknown schedule '{}' (expected constant or inverse_time)", kind));
  }
  r.Done();
  return s;
}

template <typename Fn>
void Checked(const Reader& r, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    r.FailHere(e.what());
  }
}

void ReadData(Reader& r, datagen::SynthConfig& d) {
  r.Read("num_clients", d.num_clients);
  r.Read("samples_per_client", d.samples_per_client);
  r.Read("d_local", d.d_local);
  r.Read("d_global", d.d_global);
  r.Read("d_label", d.d_label);
  r.Read("noise_std", d.noise_std);
  r.Read("global_strength", d.global_strength);
  r.Read("noniid_shift", d.noniid_shift);
  r.Read("public_fraction", d.public_fraction);
  std::string w;
  if (r.Read("weighting", w)) {
    if (w == "proportional") {
      d.weighting = datagen::ClientWeighting::kProportional;
    } else if (w == "uniform") {
      d.weighting = datagen::ClientWeighting::kUniform;
    } else {
      r.Fail(r.Raw("weighting"), fmt::format("unknown weighting '{}'", w));
    }
  }
  r.Done();
  Checked(r, [&] { d.Validate(); });
}

void ReadModel(Reader& r, fedcore::ModelConfig& m) {
  r.ReadList("global_hidden", m.global_hidden);
  r.Read("u0_dim", m.u0_dim);
  r.ReadList("local_hidden", m.local_hidden);
  std::string s;
  if (r.Read("hidden_activation", s)) {
    Checked(r, [&] { m.hidden_activation = nnet::ParseActivation(s); });
  }
  if (r.Read("combiner", s)) Checked(r, [&] { m.combiner = fedcore::ParseCombiner(s); });
  // An empty list in YAML ("[]") parses as an empty sequence: no hidden layer.
  r.Done();
}

void ReadFederation(Reader& r, ExperimentConfig& c) {
  fedcore::FederationConfig& f = c.federation;
  int n = -1;
  if (r.Read("N", n) && n != c.data.num_clients) {
    r.Fail(r.Raw("N"), fmt::format("federation.N ({}) must equal data.num_clients ({})", n,
                                   c.data.num_clients));
  }
  r.Read("K", f.K);
  r.Read("E_l", f.E_l);
  r.Read("B", f.B);
  r.Read("T_g", f.T_g);
  f.eta = ReadSchedule(r, "eta", f.eta);
  f.eta0 = ReadSchedule(r, "eta0", f.eta0);
  r.Read("max_learning_rate", f.max_learning_rate);
  std::string s;
  if (r.Read("aggregation", s)) Checked(r, [&] { f.aggregation = fedcore::ParseAggregation(s); });
  if (r.Read("selection", s) && s != "uniform_without_replacement") {
    r.Fail(r.Raw("selection"),
           fmt::format("unknown selection '{}' (expected uniform_without_replacement)", s));
  }
  if (auto m = r.Child("model")) ReadModel(*m, f.model);
  if (auto ch = r.Child("channel")) {
    ChannelSpec spec;
    double v = 0.0;
    if (ch->Read("t_p", v)) spec.t_p = v;
    if (ch->Read("gamma_target", v)) spec.gamma_target = v;
    ch->Done();
    if (spec.t_p.has_value() == spec.gamma_target.has_value()) {
      ch->FailHere("federation.channel needs exactly one of 't_p' or 'gamma_target'");
    }
    if (spec.t_p && !(*spec.t_p >= 0.0)) ch->FailHere("federation.channel.t_p must be >= 0");
    if (spec.gamma_target && !(*spec.gamma_target > 0.0 && *spec.gamma_target < 1.0)) {
      ch->FailHere("federation.channel.gamma_target must lie in (0, 1)");
    }
    c.channel = spec;
  }
  r.Done();
}

void ReadQueue(Reader& r, QueueSection& q) {
  r.Read("lambda_n", q.lambda_n);
  r.ReadList("alpha1", q.alpha1);
  r.Read("mu1", q.mu1);
  r.Read("mu2", q.mu2);
  double tp = 0.0;
  if (r.Read("t_p", tp)) q.t_p = tp;
  r.ReadList("gamma_targets", q.gamma_targets);
  r.Read("simulate_jobs", q.simulate_jobs);
  r.Read("grid_max", q.grid_max);
  r.Read("grid_points", q.grid_points);
  r.Done();
}

void ValidateQueue(const Reader& r, const QueueSection& q) {
  if (q.alpha1.empty()) r.FailHere("queue.alpha1 must not be empty");
  for (double a : q.alpha1) {
    if (!(a >= 0.0 && a <= 1.0)) r.FailHere(fmt::format("queue.alpha1 value {} not in [0, 1]", a));
    Checked(r, [&] { netqueue::Analyze(q.Params(a)); });
  }
  if (q.t_p && !(*q.t_p >= 0.0)) r.FailHere("queue.t_p must be >= 0");
  for (double g : q.gamma_targets) {
    if (!(g > 0.0 && g < 1.0)) r.FailHere(fmt::format("queue.gamma_targets value {} not in (0, 1)", g));
  }
  if (q.simulate_jobs < 100) r.FailHere("queue.simulate_jobs must be >= 100");
  if (!(q.grid_max >= 0.0 && std::isfinite(q.grid_max))) r.FailHere("queue.grid_max must be >= 0");
  if (q.grid_points < 2) r.FailHere("queue.grid_points must be >= 2");
}

void ReadBounds(Reader& r, BoundsSection& b) {
  bounds::BoundParams& p = b.params;
  r.Read("L", p.L);
  r.Read("mu", p.mu);
  r.Read("sigma2", p.sigma2);
  r.Read("sigma0_2", p.sigma0_2);
  r.Read("G2", p.G2);
  r.Read("lambda_niid", p.lambda_niid);
  r.Read("f_init", p.f_init);
  r.Read("f_star", p.f_star);
  r.Read("f0", p.f0);
  r.Read("E_l", p.E_l);
  r.Read("K", p.K);
  r.Read("T_g", p.T_g);
  r.Read("gamma", p.gamma);
  if (r.Has("sweeps")) {
    const YAML::Node list = r.Raw("sweeps");
    if (!list.IsSequence()) r.Fail(list, "bounds.sweeps must be a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Reader s(list[i], fmt::format("bounds.sweeps[{}]", i), r.source());
      BoundSweepSpec spec;
      if (!s.Read("param", spec.param) || !s.ReadList("values", spec.values)) {
        s.FailHere(fmt::format("bounds.sweeps[{}] needs 'param' and 'values'", i));
      }
      s.Done();
      Checked(s, [&] { bounds::Sweep(p, spec.param, spec.values); });
      b.sweeps.push_back(std::move(spec));
    }
  }
  r.Done();
  Checked(r, [&] { p.Validate(); });
}

void ReadSweep(Reader& r, SweepSection& s) {
  r.ReadList("k_fractions", s.k_fractions);
  r.ReadList("el_values", s.el_values);
  r.Read("threshold", s.threshold);
  r.Done();
  if (s.k_fractions.empty() && s.el_values.empty()) r.FailHere("sweep grids are both empty");
  for (double f : s.k_fractions) {
    if (!(f > 0.0 && f <= 1.0)) r.FailHere(fmt::format("sweep.k_fractions value {} not in (0, 1]", f));
  }
  for (int e : s.el_values) {
    if (e < 1) r.FailHere(fmt::format("sweep.el_values value {} must be >= 1", e));
  }
  if (!(s.threshold > 0.0)) r.FailHere("sweep.threshold must be > 0");
}

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  return fmt::format("{}", v);
}

template <typename T>
std::string List(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += Num(v[i]);
    } else {
      out += fmt::format("{}", v[i]);
    }
  }
  return out + "]";
}

std::string ScheduleText(const fedcore::Schedule& s) {
  if (s.kind == fedcore::Schedule::Kind::kConstant) return Num(s.value);
  return fmt::format("{{schedule: inverse_time, c: {}, t0: {}}}", Num(s.value), Num(s.t0));
}

}  // namespace

std::string_view ExperimentModeName(ExperimentMode m) {
  for (const auto& e : kModes) {
    if (e.mode == m) return e.name;
  }
  return "?";
}

ExperimentMode ParseExperimentMode(std::string_view name) {
  for (const auto& e : kModes) {
    if (e.name == name) return e.mode;
  }
  std::string known;
  for (const auto& e : kModes) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw ConfigError(fmt::format("unknown mode '{}' (expected one of {})", name, known));
}

netqueue::He2Params QueueSection::Params(double a1) const {
  return {lambda_n, a1, 1.0 - a1, mu1, mu2};
}

ExperimentConfig ParseConfig(const std::string& text, const std::string& source,
                             std::optional<ExperimentMode> mode_override) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    FailAt(source, e.mark.line + 1, e.msg);
  }
  ExperimentConfig c;
  Reader top(root, "", source);

  std::string mode;
  if (top.Read("mode", mode)) {
    try {
      c.mode = ParseExperimentMode(mode);
    } catch (const ConfigError& e) {
      top.Fail(top.Raw("mode"), e.what());
    }
    if (mode_override && *mode_override != c.mode) {
      top.Fail(top.Raw("mode"), fmt::format("config is for mode {}, not {}", mode,
                                            ExperimentModeName(*mode_override)));
    }
  }
  if (mode_override) c.mode = *mode_override;
  std::vector<std::uint64_t> seeds;
  if (top.ReadList("seeds", seeds)) {
    if (seeds.empty()) top.Fail(top.Raw("seeds"), "seeds must not be empty");
    c.seeds = seeds;
  }
  top.Read("output_dir", c.output_dir);
  top.Read("workers", c.workers);
  if (c.workers < 1) top.Fail(top.Raw("workers"), "workers must be >= 1");

  if (auto r = top.Child("data")) ReadData(*r, c.data);
  c.federation.N = c.data.num_clients;
  c.federation.K = std::min(c.federation.K, c.federation.N);
  std::optional<Reader> fed = top.Child("federation");
  if (fed) ReadFederation(*fed, c);

  std::optional<Reader> queue = top.Child("queue");
  if (queue) ReadQueue(*queue, c.queue);
  if (IsQueueMode(c.mode) && !queue) {
    top.FailHere(fmt::format("mode {} needs a 'queue' section", ExperimentModeName(c.mode)));
  }
  const Reader& qr = queue ? *queue : top;
  ValidateQueue(qr, c.queue);
  if (c.mode == ExperimentMode::kDelayPlan && c.queue.gamma_targets.empty()) {
    qr.FailHere("mode delay_plan needs queue.gamma_targets");
  }
  if (c.channel && c.queue.alpha1.size() != 1) {
    qr.FailHere("a federation channel needs a single queue.alpha1 value");
  }

  std::optional<Reader> bnd = top.Child("bounds");
  if (bnd) ReadBounds(*bnd, c.bounds);
  if (c.mode == ExperimentMode::kBoundsSweep && (!bnd || c.bounds.sweeps.empty())) {
    (bnd ? *bnd : top).FailHere("mode bounds_sweep needs a 'bounds' section with 'sweeps'");
  }

  if (auto r = top.Child("sweep")) ReadSweep(*r, c.sweep);
  top.Done();

  const Reader& fr = fed ? *fed : top;
  Checked(fr, [&] { c.federation.Validate(); });
  return c;
}

ExperimentConfig LoadConfig(const std::string& path, std::optional<ExperimentMode> mode_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path));
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path, mode_override);
}

std::string EmitConfig(const ExperimentConfig& c, bool include_output_dir) {
  std::string o;
  auto line = [&](std::string_view s) {
    o += s;
    o += '\n';
  };
  const auto& d = c.data;
  const auto& f = c.federation;
  const auto& q = c.queue;
  const auto& b = c.bounds.params;
  line(fmt::format("mode: {}", ExperimentModeName(c.mode)));
  line(fmt::format("seeds: {}", List(c.seeds)));
  if (include_output_dir) {
    std::string dir;
    for (char ch : c.output_dir) {
      if (ch == '\\' || ch == '"') dir += '\\';
      dir += ch;
    }
    line(fmt::format("output_dir: \"{}\"", dir));
    line(fmt::format("workers: {}", c.workers));
  }
  line("data:");
  line(fmt::format("  num_clients: {}", d.num_clients));
  line(fmt::format("  samples_per_client: {}", d.samples_per_client));
  line(fmt::format("  d_local: {}", d.d_local));
  line(fmt::format("  d_global: {}", d.d_global));
  line(fmt::format("  d_label: {}", d.d_label));
  line(fmt::format("  noise_std: {}", Num(d.noise_std)));
  line(fmt::format("  global_strength: {}", Num(d.global_strength)));
  line(fmt::format("  noniid_shift: {}", Num(d.noniid_shift)));
  line(fmt::format("  public_fraction: {}", Num(d.public_fraction)));
  line(fmt::format("  weighting: {}", d.weighting == datagen::ClientWeighting::kProportional
                                           ? "proportional"
                                           : "uniform"));
  line("federation:");
  line(fmt::format("  N: {}", f.N));
  line(fmt::format("  K: {}", f.K));
  line(fmt::format("  E_l: {}", f.E_l));
  line(fmt::format("  B: {}", f.B));
  line(fmt::format("  T_g: {}", f.T_g));
  line(fmt::format("  eta: {}", ScheduleText(f.eta)));
  line(fmt::format("  eta0: {}", ScheduleText(f.eta0)));
  line(fmt::format("  max_learning_rate: {}", Num(f.max_learning_rate)));
  line(fmt::format("  aggregation: {}", fedcore::AggregationName(f.aggregation)));
  line("  selection: uniform_without_replacement");
  line("  model:");
  line(fmt::format("    global_hidden: {}", List(f.model.global_hidden)));
  line(fmt::format("    u0_dim: {}", f.model.u0_dim));
  line(fmt::format("    local_hidden: {}", List(f.model.local_hidden)));
  line(fmt::format("    hidden_activation: {}", nnet::ActivationName(f.model.hidden_activation)));
  line(fmt::format("    combiner: {}", fedcore::CombinerName(f.model.combiner)));
  if (c.channel) {
    line("  channel:");
    if (c.channel->t_p) line(fmt::format("    t_p: {}", Num(*c.channel->t_p)));
    if (c.channel->gamma_target) {
      line(fmt::format("    gamma_target: {}", Num(*c.channel->gamma_target)));
    }
  }
  line("queue:");
  line(fmt::format("  lambda_n: {}", Num(q.lambda_n)));
  line(fmt::format("  alpha1: {}", List(q.alpha1)));
  line(fmt::format("  mu1: {}", Num(q.mu1)));
  line(fmt::format("  mu2: {}", Num(q.mu2)));
  if (q.t_p) line(fmt::format("  t_p: {}", Num(*q.t_p)));
  line(fmt::format("  gamma_targets: {}", List(q.gamma_targets)));
  line(fmt::format("  simulate_jobs: {}", q.simulate_jobs));
  line(fmt::format("  grid_max: {}", Num(q.grid_max)));
  line(fmt::format("  grid_points: {}", q.grid_points));
  line("bounds:");
  line(fmt::format("  L: {}", Num(b.L)));
  line(fmt::format("  mu: {}", Num(b.mu)));
  line(fmt::format("  sigma2: {}", Num(b.sigma2)));
  line(fmt::format("  sigma0_2: {}", Num(b.sigma0_2)));
  line(fmt::format("  G2: {}", Num(b.G2)));
  line(fmt::format("  lambda_niid: {}", Num(b.lambda_niid)));
  line(fmt::format("  f_init: {}", Num(b.f_init)));
  line(fmt::format("  f_star: {}", Num(b.f_star)));
  line(fmt::format("  f0: {}", Num(b.f0)));
  line(fmt::format("  E_l: {}", b.E_l));
  line(fmt::format("  K: {}", b.K));
  line(fmt::format("  T_g: {}", b.T_g));
  line(fmt::format("  gamma: {}", Num(b.gamma)));
  if (!c.bounds.sweeps.empty()) {
    line("  sweeps:");
    for (const auto& s : c.bounds.sweeps) {
      line(fmt::format("    - param: {}", s.param));
      line(fmt::format("      values: {}", List(s.values)));
    }
  }
  line("sweep:");
  line(fmt::format("  k_fractions: {}", List(c.sweep.k_fractions)));
  line(fmt::format("  el_values: {}", List(c.sweep.el_values)));
  line(fmt::format("  threshold: {}", Num(c.sweep.threshold)));
  return o;
}

std::uint64_t ConfigHash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : EmitConfig(c, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::optional<netqueue::ChannelModel> ResolveChannel(const ExperimentConfig& c,
                                                     std::uint64_t seed) {
  if (!c.channel) return std::nullopt;
  netqueue::ChannelModel m;
  m.params = c.queue.Params(c.queue.alpha1.front());
  m.seed = seed;
  m.t_p = c.channel->t_p ? *c.channel->t_p
                         : netqueue::RequiredDeadline(netqueue::Analyze(m.params),
                                                      *c.channel->gamma_target);
  return m;
}

}  // namespace vhfl::harness
