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

#include "vhfl/harness/experiments.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vhfl/bounds/convergence_bounds.h"
#include "vhfl/datagen/synth.h"
#include "vhfl/fedcore/trace_io.h"
#include "vhfl/netqueue/he2_queue.h"
#include "vhfl/netqueue/simulation.h"
#include "vhfl/nnet/checkpoint.h"
#include "vhfl/parallel.h"
#include "vhfl/harness/output.h"

namespace vhfl::harness {

namespace fs = std::filesystem;
using fedcore::Mode;
using fedcore::TrainingTrace;

namespace {

constexpr Mode kCompareModes[] = {Mode::kVhfl, Mode::kHfl, Mode::kCloud, Mode::kCloudLocal};

std::string Num(double v) { return fmt::format("{}", v); }

datagen::SynthConfig SeededData(const ExperimentConfig& c, std::uint64_t seed) {
  datagen::SynthConfig d = c.data;
  d.seed = seed;
  return d;
}

fedcore::FederationConfig SeededFederation(const ExperimentConfig& c, std::uint64_t seed) {
  fedcore::FederationConfig f = c.federation;
  f.seed = seed;
  f.deadline_channel = ResolveChannel(c, seed);
  return f;
}

std::string TraceCsv(const std::string& head, std::span<const TrainingTrace> traces) {
  std::ostringstream out;
  out << head;
  fedcore::WriteTraceCsv(out, traces);
  return out.str();
}

void WriteRunFiles(const fs::path& dir, const std::string& head, const fedcore::RunResult& r) {
  WriteTextFile(dir / "trace.csv", TraceCsv(head, {&r.trace, 1}));
  WriteTextFile(dir / "wbar.ckpt", head + nnet::ToCheckpoint(r.center.wbar));
  if (r.center.uses_global()) WriteTextFile(dir / "w0.ckpt", head + nnet::ToCheckpoint(r.center.w0));
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd Stats(const std::vector<double>& v) {
  MeanSd s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

void WriteTraining(const ExperimentConfig& c, const fs::path& dir, const std::string& head,
                   std::span<const Mode> modes) {
  const std::vector<ModeRun> runs = RunTraining(c, modes);
  std::vector<TrainingTrace> traces;
  std::string summary = head + "mode,seed,final_train_mse,final_test_mse,final_test_error_ratio\n";
  std::map<std::string, std::vector<const fedcore::EpochRecord*>> by_mode;
  for (const ModeRun& run : runs) {
    const std::string name(fedcore::ModeName(run.mode));
    const fs::path sub = modes.size() == 1 ? dir / fmt::format("seed_{}", run.seed)
                                           : dir / name / fmt::format("seed_{}", run.seed);
    WriteRunFiles(sub, head, run.result);
    traces.push_back(run.result.trace);
    const auto& last = run.result.trace.epochs.back();
    summary += fmt::format("{},{},{},{},{}\n", name, run.seed, Num(last.train_mse),
                           Num(last.test_mse), Num(last.test_error_ratio));
    by_mode[name].push_back(&last);
  }
  WriteTextFile(dir / "traces.csv", TraceCsv(head, traces));
  WriteTextFile(dir / "summary.csv", summary);

  std::string stats = head + "mode,metric,n,mean,sd\n";
  for (Mode m : modes) {
    const std::string name(fedcore::ModeName(m));
    const auto& rows = by_mode[name];
    auto emit = [&](const char* metric, auto field) {
      std::vector<double> v;
      for (const auto* r : rows) v.push_back(field(*r));
      const MeanSd s = Stats(v);
      stats += fmt::format("{},{},{},{},{}\n", name, metric, v.size(), Num(s.mean), Num(s.sd));
    };
    emit("final_train_mse", [](const fedcore::EpochRecord& r) { return r.train_mse; });
    emit("final_test_mse", [](const fedcore::EpochRecord& r) { return r.test_mse; });
    emit("final_test_error_ratio", [](const fedcore::EpochRecord& r) { return r.test_error_ratio; });
  }
  WriteTextFile(dir / "stats.csv", stats);
}

void WriteSweep(const ExperimentConfig& c, const fs::path& dir, const std::string& head) {
  const std::vector<SweepPoint> points = RunKElSweep(c);
  std::string csv =
      head + "swept_param,value,seed,epochs_to_threshold,reached,final_train_mse,final_test_mse\n";
  for (const SweepPoint& p : points) {
    csv += fmt::format("{},{},{},{},{},{},{}\n", p.param, p.value, p.seed, p.epochs_to_threshold,
                       p.reached ? 1 : 0, Num(p.final_train_mse), Num(p.final_test_mse));
    const fs::path sub = dir / fmt::format("{}_{}", p.param, p.value) / fmt::format("seed_{}", p.seed);
    WriteTextFile(sub / "trace.csv", TraceCsv(head, {&p.trace, 1}));
  }
  WriteTextFile(dir / "sweep.csv", csv);
  std::string summary = head +
      "swept_param,value,runs,mean_epochs_to_threshold,unreached,mean_final_train_mse\n";
  for (const SweepSummary& s : SummarizeSweep(points)) {
    summary += fmt::format("{},{},{},{},{},{}\n", s.param, s.value, s.runs,
                           Num(s.mean_epochs_to_threshold), s.unreached,
                           Num(s.mean_final_train_mse));
  }
  WriteTextFile(dir / "sweep_summary.csv", summary);
}

fs::path AlphaDir(const ExperimentConfig& c, const fs::path& dir, double a1) {
  return c.queue.alpha1.size() == 1 ? dir : dir / fmt::format("alpha1_{}", Num(a1));
}

std::vector<double> DeadlineGrid(const ExperimentConfig& c) {
  double top = c.queue.grid_max;
  if (top == 0.0) {
    for (double a1 : c.queue.alpha1) {
      top = std::max(top, netqueue::RequiredDeadline(netqueue::Analyze(c.queue.Params(a1)), 0.999));
    }
    top = std::ceil(top * 10.0) / 10.0;
  }
  std::vector<double> grid(c.queue.grid_points);
  for (int i = 0; i < c.queue.grid_points; ++i) {
    grid[i] = top * static_cast<double>(i) / static_cast<double>(c.queue.grid_points - 1);
  }
  return grid;
}

std::string QueueReportHead(const std::string& head, const netqueue::QueueAnalysis& q) {
  const auto& p = q.params;
  return head + fmt::format(
                    "lambda_n: {}\nalpha1: {}\nalpha2: {}\nmu1: {}\nmu2: {}\nrho: {}\nmu12: {}\n"
                    "s1: {}\ns2: {}\nmean_sojourn: {}\n",
                    Num(p.lambda_n), Num(p.alpha1), Num(p.alpha2), Num(p.mu1), Num(p.mu2),
                    Num(q.rho), Num(q.mu12), Num(q.s1), Num(q.s2),
                    Num(netqueue::MeanSojourn(q)));
}

std::string DeadlinePlan(const ExperimentConfig& c, const netqueue::QueueAnalysis& q,
                         const std::string& head, std::string& report) {
  std::string csv = head + "gamma_target,t_p,gamma_at_t_p\n";
  if (!c.queue.gamma_targets.empty()) report += "required_t_p:\n";
  for (double g : c.queue.gamma_targets) {
    const double tp = netqueue::RequiredDeadline(q, g);
    const double got = netqueue::SuccessRate(q, tp);
    csv += fmt::format("{},{},{}\n", Num(g), Num(tp), Num(got));
    report += fmt::format("  gamma {} -> t_p {}\n", Num(g), Num(tp));
  }
  return csv;
}

void WriteQueue(const ExperimentConfig& c, const fs::path& dir, const std::string& head,
                bool simulate) {
  const std::vector<double> grid = DeadlineGrid(c);
  for (double a1 : c.queue.alpha1) {
    const netqueue::QueueAnalysis q = netqueue::Analyze(c.queue.Params(a1));
    const fs::path out = AlphaDir(c, dir, a1);
    std::string report = QueueReportHead(head, q);
    if (c.queue.t_p) {
      report += fmt::format("gamma_at_t_p: t_p {} -> gamma {}\n", Num(*c.queue.t_p),
                            Num(netqueue::SuccessRate(q, *c.queue.t_p)));
    }
    std::vector<double> mc(grid.size(), 0.0);
    if (simulate) {
      // One independent simulation per seed; counts are merged afterwards.
      std::vector<std::vector<std::int64_t>> counts(c.seeds.size());
      std::vector<double> sums(c.seeds.size(), 0.0);
      std::vector<std::int64_t> sizes(c.seeds.size(), 0);
      ParallelFor(c.seeds.size(), c.workers, [&](std::size_t i) {
        std::vector<double> s = netqueue::SimulateMg1(q.params, c.queue.simulate_jobs, c.seeds[i]);
        std::sort(s.begin(), s.end());
        for (double v : s) sums[i] += v;
        sizes[i] = static_cast<std::int64_t>(s.size());
        for (double t : grid) {
          counts[i].push_back(std::upper_bound(s.begin(), s.end(), t) - s.begin());
        }
      });
      std::int64_t total = 0;
      double sum = 0.0;
      for (std::size_t i = 0; i < c.seeds.size(); ++i) {
        total += sizes[i];
        sum += sums[i];
        report += fmt::format("seed {}: jobs_kept {} mean_sojourn_mc {}\n", c.seeds[i], sizes[i],
                              Num(sums[i] / static_cast<double>(sizes[i])));
        for (std::size_t k = 0; k < grid.size(); ++k) mc[k] += static_cast<double>(counts[i][k]);
      }
      for (double& m : mc) m /= static_cast<double>(total);
      report += fmt::format("mean_sojourn_mc: {}\n", Num(sum / static_cast<double>(total)));
    }
    std::string csv = head + (simulate ? "t_p,gamma_formula,gamma_mc\n" : "t_p,gamma_formula\n");
    report += "gamma_table:\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double g = netqueue::SuccessRate(q, grid[k]);
      csv += simulate ? fmt::format("{},{},{}\n", Num(grid[k]), Num(g), Num(mc[k]))
                      : fmt::format("{},{}\n", Num(grid[k]), Num(g));
      report += simulate ? fmt::format("  t_p {} gamma {} gamma_mc {}\n", Num(grid[k]), Num(g),
                                       Num(mc[k]))
                         : fmt::format("  t_p {} gamma {}\n", Num(grid[k]), Num(g));
    }
    WriteTextFile(out / "gamma_vs_tp.csv", csv);
    const std::string plan = DeadlinePlan(c, q, head, report);
    if (!c.queue.gamma_targets.empty()) WriteTextFile(out / "tp_vs_gamma.csv", plan);
    WriteTextFile(out / "report.txt", report);
  }
}

void WriteDelayPlan(const ExperimentConfig& c, const fs::path& dir, const std::string& head) {
  for (double a1 : c.queue.alpha1) {
    const netqueue::QueueAnalysis q = netqueue::Analyze(c.queue.Params(a1));
    const fs::path out = AlphaDir(c, dir, a1);
    std::string report = QueueReportHead(head, q);
    WriteTextFile(out / "tp_vs_gamma.csv", DeadlinePlan(c, q, head, report));
    WriteTextFile(out / "report.txt", report);
  }
}

void WriteBounds(const ExperimentConfig& c, const fs::path& dir, const std::string& head) {
  std::string csv = head + "swept_param,value,nonconvex_bound,convex_bound\n";
  for (const BoundSweepSpec& s : c.bounds.sweeps) {
    for (const bounds::SweepRow& r : bounds::Sweep(c.bounds.params, s.param, s.values)) {
      csv += fmt::format("{},{},{},{}\n", r.param, Num(r.value), Num(r.nonconvex), Num(r.convex));
    }
  }
  WriteTextFile(dir / "bounds_sweep.csv", csv);
  const auto& p = c.bounds.params;
  const bounds::BoundPair lossy = bounds::LossyBounds(p);
  WriteTextFile(dir / "report.txt",
                head + fmt::format("nonconvex_bound: {}\nconvex_bound: {}\n"
                                   "lossy_nonconvex_bound: {}\nlossy_convex_bound: {}\n"
                                   "effective_K: {}\n",
                                   Num(bounds::NonconvexBound(p)), Num(bounds::ConvexBound(p)),
                                   Num(lossy.nonconvex), Num(lossy.convex),
                                   Num(static_cast<double>(p.K) * p.gamma)));
}

}  // namespace

std::vector<ModeRun> RunTraining(const ExperimentConfig& c, std::span<const Mode> modes) {
  std::vector<datagen::FederationDataset> data(c.seeds.size());
  ParallelFor(c.seeds.size(), c.workers,
              [&](std::size_t i) { data[i] = datagen::Generate(SeededData(c, c.seeds[i])); });
  std::vector<ModeRun> runs;
  for (Mode m : modes) {
    for (std::uint64_t s : c.seeds) runs.push_back({m, s, {}});
  }
  ParallelFor(runs.size(), c.workers, [&](std::size_t i) {
    const std::size_t seed_index = i % c.seeds.size();
    runs[i].result =
        fedcore::Run(runs[i].mode, SeededFederation(c, runs[i].seed), data[seed_index]);
  });
  return runs;
}

int EpochsToThreshold(const TrainingTrace& trace, double threshold) {
  for (const auto& e : trace.epochs) {
    if (e.train_mse <= threshold) return e.epoch;
  }
  return static_cast<int>(trace.epochs.size()) + 1;
}

std::vector<SweepPoint> RunKElSweep(const ExperimentConfig& c) {
  const int n = c.federation.N;
  std::vector<int> ks;
  for (double f : c.sweep.k_fractions) {
    const int k = std::clamp(static_cast<int>(std::lround(f * n)), 1, n);
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  std::vector<SweepPoint> points;
  auto add = [&](const char* param, int value) {
    for (std::uint64_t s : c.seeds) {
      SweepPoint p;
      p.param = param;
      p.value = value;
      p.seed = s;
      points.push_back(std::move(p));
    }
  };
  for (int k : ks) add("K", k);
  for (int e : c.sweep.el_values) add("E_l", e);
  std::vector<datagen::FederationDataset> data(c.seeds.size());
  ParallelFor(c.seeds.size(), c.workers,
              [&](std::size_t i) { data[i] = datagen::Generate(SeededData(c, c.seeds[i])); });
  ParallelFor(points.size(), c.workers, [&](std::size_t i) {
    SweepPoint& p = points[i];
    fedcore::FederationConfig f = SeededFederation(c, p.seed);
    (p.param == "K" ? f.K : f.E_l) = p.value;
    const std::size_t seed_index =
        std::find(c.seeds.begin(), c.seeds.end(), p.seed) - c.seeds.begin();
    p.trace = fedcore::RunVhfl(f, data[seed_index]).trace;
    p.epochs_to_threshold = EpochsToThreshold(p.trace, c.sweep.threshold);
    p.reached = p.epochs_to_threshold <= static_cast<int>(p.trace.epochs.size());
    p.final_train_mse = p.trace.epochs.back().train_mse;
    p.final_test_mse = p.trace.epochs.back().test_mse;
  });
  return points;
}

std::vector<SweepSummary> SummarizeSweep(std::span<const SweepPoint> points) {
  std::vector<SweepSummary> out;
  for (const SweepPoint& p : points) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SweepSummary& s) {
      return s.param == p.param && s.value == p.value;
    });
    if (it == out.end()) {
      out.push_back({p.param, p.value});
      it = out.end() - 1;
    }
    ++it->runs;
    it->mean_epochs_to_threshold += p.epochs_to_threshold;
    it->unreached += p.reached ? 0 : 1;
    it->mean_final_train_mse += p.final_train_mse;
  }
  for (SweepSummary& s : out) {
    s.mean_epochs_to_threshold /= s.runs;
    s.mean_final_train_mse /= s.runs;
  }
  return out;
}

void WriteExperiment(const ExperimentConfig& c, const fs::path& dir) {
  const std::string head = HashComment(ConfigHash(c));
  WriteTextFile(dir / "config.yaml", head + EmitConfig(c));
  switch (c.mode) {
    case ExperimentMode::kVhfl:
    case ExperimentMode::kHfl:
    case ExperimentMode::kCloud:
    case ExperimentMode::kCloudLocal: {
      const Mode m = fedcore::ParseMode(ExperimentModeName(c.mode));
      WriteTraining(c, dir, head, {&m, 1});
      break;
    }
    case ExperimentMode::kCompare:
      WriteTraining(c, dir, head, kCompareModes);
      break;
    case ExperimentMode::kSweep:
      WriteSweep(c, dir, head);
      break;
    case ExperimentMode::kQueueAnalyze:
      WriteQueue(c, dir, head, false);
      break;
    case ExperimentMode::kQueueSimulate:
      WriteQueue(c, dir, head, true);
      break;
    case ExperimentMode::kDelayPlan:
      WriteDelayPlan(c, dir, head);
      break;
    case ExperimentMode::kBoundsSweep:
      WriteBounds(c, dir, head);
      break;
  }
}

void RunExperiment(const ExperimentConfig& c) {
  StagedOutput out(c.output_dir);
  WriteExperiment(c, out.dir());
  out.Commit();
}

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Vertical-horizontal federated learning experiments", "vhfl-lab"};
  std::string mode;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("mode", mode,
                 "vhfl, hfl, cloud, cloud_local, compare, sweep, queue_analyze, queue_simulate, "
                 "delay_plan or bounds_sweep")
      ->required();
  app.add_option("--config", config_path, "YAML experiment configuration")->required();
  CLI::Option* seed_opt = app.add_option("--seed", seed, "run only this seed");
  app.add_option("--out", out, "output directory (overrides output_dir)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ExperimentConfig config;
  try {
    config = LoadConfig(config_path, ParseExperimentMode(mode));
    if (seed_opt->count() > 0) config.seeds = {seed};
    if (!out.empty()) config.output_dir = out;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "vhfl-lab: config error: {}\n", e.what());
    return 2;
  }
  try {
    RunExperiment(config);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "vhfl-lab: config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "vhfl-lab: error: {}\n", e.what());
    return 3;
  }
  fmt::print("{}\n", config.output_dir);
  return 0;
}

}  // namespace vhfl::harness
