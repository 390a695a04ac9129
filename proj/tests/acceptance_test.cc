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

// Acceptance suite: runs each criterion once and prints one PASS/FAIL line
// per criterion. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "test_util.h"
#include "vhfl/bounds/convergence_bounds.h"
#include "vhfl/datagen/noniid.h"
#include "vhfl/datagen/synth.h"
#include "vhfl/fedcore/federation.h"
#include "vhfl/fedcore/runners.h"
#include "vhfl/harness/experiments.h"
#include "vhfl/netqueue/he2_queue.h"
#include "vhfl/netqueue/simulation.h"

namespace vhfl {
namespace {

using nnet::DenseNet;
using nnet::Matrix;
using nnet::Vector;
using testing::CentralDifference;
using testing::RelativeError;

struct Outcome {
  bool ok = true;
  std::string detail;

  void Require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

// ---------------------------------------------------------------------------
// AC1: backward against central differences, for the network and for the
// vertical gradient of a client loss.

double NetLoss(const DenseNet& net, const Matrix& x, const Matrix& y) {
  return nnet::MseLoss(nnet::Predict(net, x), y).loss;
}

Outcome GradientExactness() {
  Outcome out;
  Rng rng(2024);
  double worst = 0.0;
  int nets = 0;
  while (nets < 20) {
    const DenseNet net = testing::RandomNet(rng, 4, 32);
    const Matrix x = testing::RandomMatrix(5, net.in_dim(), rng);
    if (testing::MinReluMargin(net, x) < 1e-3) continue;
    const Matrix y = testing::RandomMatrix(5, net.out_dim(), rng);
    const auto fwd = nnet::Forward(net, x);
    const auto g = nnet::Backward(net, fwd.trace, nnet::MseLoss(fwd.outputs, y).grad, true);
    std::vector<double> analytic;
    for (const auto& l : g.layers) {
      for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
        for (Eigen::Index c = 0; c < l.weights.cols(); ++c) analytic.push_back(l.weights(r, c));
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) analytic.push_back(l.bias(r));
    }
    const std::vector<double> params = net.Flatten();
    auto of_params = [&](const std::vector<double>& p) {
      return NetLoss(net.WithParameters(p), x, y);
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
      worst = std::max(worst, RelativeError(analytic[i], CentralDifference(of_params, params, i)));
    }
    std::vector<double> xs(x.size());
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) xs[r * x.cols() + c] = x(r, c);
    auto of_input = [&](const std::vector<double>& v) {
      Matrix m(x.rows(), x.cols());
      for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index c = 0; c < x.cols(); ++c) m(r, c) = v[r * x.cols() + c];
      return NetLoss(net, m, y);
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double a = g.input_grad(static_cast<Eigen::Index>(i) / x.cols(),
                                    static_cast<Eigen::Index>(i) % x.cols());
      worst = std::max(worst, RelativeError(a, CentralDifference(of_input, xs, i)));
    }
    ++nets;
  }
  out.Require(worst < 1e-4, fmt::format("network gradient rel err {:.2e}", worst));

  // Vertical gradient: one client, full batch, one local epoch.
  double vworst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    datagen::SynthConfig sc;
    sc.num_clients = 2;
    sc.samples_per_client = 15;
    sc.seed = seed;
    const auto data = datagen::Generate(sc);
    fedcore::FederationConfig fc;
    fc.N = fc.K = 2;
    fc.seed = seed;
    const DenseNet w0 = fedcore::InitialGlobalModel(fc, data.d_global);
    const DenseNet wbar = fedcore::InitialLocalModel(fc, data.d_local, data.d_label, true);
    const std::vector<int> sel{0};
    const auto u0 = fedcore::CenterBroadcast(w0, data.global, data.train, sel);
    fedcore::LocalTraining opts;
    opts.E_l = 1;
    opts.B = 1000;
    opts.eta = fedcore::Schedule::Constant(0.05);
    const auto& client = data.train[0];
    const auto upd = fedcore::ClientUpdate(client, wbar, &u0[0], opts);

    const auto n = static_cast<Eigen::Index>(client.samples.size());
    Matrix xl(n, data.d_local), y(n, data.d_label), u(n, w0.out_dim());
    for (Eigen::Index i = 0; i < n; ++i) {
      xl.row(i) = client.samples[i].x_local.transpose();
      y.row(i) = client.samples[i].y.transpose();
      u.row(i) = u0[0].At(client.samples[i].id).transpose();
    }
    auto client_loss = [&](const Matrix& rows) {
      Matrix in(n, rows.cols() + xl.cols());
      in << rows, xl;
      return NetLoss(wbar, in, y);
    };
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < u.cols(); ++k) {
        auto f = [&](const std::vector<double>& v) {
          Matrix m = u;
          m(i, k) = v[0];
          return client_loss(m);
        };
        const double fd = CentralDifference(f, {u(i, k)}, 0);
        vworst = std::max(vworst, RelativeError(upd.vgrad.At(client.samples[i].id)(k), fd));
      }
    }
  }
  out.Require(vworst < 1e-4, fmt::format("vertical gradient rel err {:.2e}", vworst));
  out.detail = fmt::format("20 nets max rel err {:.2e}, vertical {:.2e}", worst, vworst) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC2: success rate formula against simulation.

netqueue::He2Params Link(double alpha1) { return {2.0, alpha1, 1.0 - alpha1, 8.0, 2.0}; }

Outcome QueueVersusMonteCarlo() {
  Outcome out;
  const std::vector<double> alphas{0.25, 0.5, 0.75};
  double top = 0.0;
  for (double a : alphas) {
    top = std::max(top, netqueue::RequiredDeadline(netqueue::Analyze(Link(a)), 0.999));
  }
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[i] = top * (i + 1) / 20.0;

  double worst = 0.0;
  double mean_half = 0.0;
  for (double a : alphas) {
    const auto q = netqueue::Analyze(Link(a));
    std::vector<double> s = netqueue::SimulateMg1(q.params, 1000000, 17);
    std::sort(s.begin(), s.end());
    double prev = -1.0;
    for (double t : grid) {
      const double f = netqueue::SuccessRate(q, t);
      const double mc = static_cast<double>(std::upper_bound(s.begin(), s.end(), t) - s.begin()) /
                        static_cast<double>(s.size());
      worst = std::max(worst, std::abs(f - mc));
      out.Require(f > prev, fmt::format("gamma not increasing at alpha1={} t_p={}", a, t));
      prev = f;
    }
    if (a == 0.5) {
      double sum = 0.0;
      for (double v : s) sum += v;
      mean_half = sum / static_cast<double>(s.size());
    }
  }
  out.Require(worst <= 0.01, fmt::format("max |gamma_formula - gamma_mc| = {:.4f}", worst));
  for (double g : {0.5, 0.9, 0.99}) {
    double prev = 0.0;
    for (double a : {0.75, 0.5, 0.25}) {
      const double tp = netqueue::RequiredDeadline(netqueue::Analyze(Link(a)), g);
      out.Require(tp > prev, fmt::format("t_p not larger for alpha1={} at gamma={}", a, g));
      prev = tp;
    }
  }
  out.Require(std::abs(mean_half - 1.0208) <= 0.02,
              fmt::format("mean sojourn {:.4f} outside 1.0208 +- 0.02", mean_half));
  out.detail = fmt::format("max |dgamma| {:.4f} over 3x20 points, mean sojourn {:.4f}", worst,
                           mean_half) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC3: deadline planner.

Outcome DeadlinePlanner() {
  Outcome out;
  const auto q = netqueue::Analyze(Link(0.5));
  double worst = 0.0;
  for (double g : {0.5, 0.9, 0.99}) {
    worst = std::max(worst, std::abs(netqueue::SuccessRate(q, netqueue::RequiredDeadline(q, g)) - g));
  }
  out.Require(worst <= 1e-6, fmt::format("round trip error {:.2e}", worst));
  std::vector<double> gammas;
  for (int i = 1; i <= 19; ++i) gammas.push_back(0.05 * i);
  for (double g : {0.97, 0.99, 0.995, 0.999}) gammas.push_back(g);
  std::vector<double> tps;
  for (double g : gammas) tps.push_back(netqueue::RequiredDeadline(q, g, 1e-10));
  double prev_slope = 0.0;
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    const double slope = (tps[i] - tps[i - 1]) / (gammas[i] - gammas[i - 1]);
    out.Require(slope > 0.0, fmt::format("t_p not increasing at gamma={}", gammas[i]));
    out.Require(slope > prev_slope, fmt::format("t_p not convex at gamma={}", gammas[i]));
    prev_slope = slope;
  }
  const double ratio = netqueue::RequiredDeadline(q, 0.99) / netqueue::RequiredDeadline(q, 0.9);
  out.Require(ratio > 0.99 / 0.9, fmt::format("ratio {:.4f} not above 1.1", ratio));
  out.detail = fmt::format("round trip {:.1e}, t_p(.99)/t_p(.9) = {:.3f}, convex on {} points",
                           worst, ratio, gammas.size()) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC4: final test MSE ordering on the default task.

harness::ExperimentConfig DefaultExperiment() {
  harness::ExperimentConfig c;
  c.seeds = {1, 2, 3, 4, 5};
  return c;
}

Outcome BaselineOrdering() {
  Outcome out;
  const harness::ExperimentConfig c = DefaultExperiment();
  const fedcore::Mode modes[] = {fedcore::Mode::kCloud, fedcore::Mode::kVhfl, fedcore::Mode::kHfl,
                                 fedcore::Mode::kCloudLocal};
  std::map<fedcore::Mode, double> mean;
  for (const auto& run : harness::RunTraining(c, modes)) {
    mean[run.mode] += run.result.trace.epochs.back().test_mse / c.seeds.size();
  }
  const double cloud = mean[fedcore::Mode::kCloud];
  const double vhfl = mean[fedcore::Mode::kVhfl];
  const double hfl = mean[fedcore::Mode::kHfl];
  const double local = mean[fedcore::Mode::kCloudLocal];
  out.Require(cloud <= vhfl, "cloud-global above VHFL");
  out.Require(vhfl < hfl, "VHFL not below HFL");
  const double margin = (local - cloud) / local;
  out.Require(margin >= 0.2, fmt::format("cloud-global margin over cloud-local {:.3f}", margin));
  out.detail = fmt::format("test MSE cloud {:.4f} <= vhfl {:.4f} < hfl {:.4f}; cloud_local {:.4f} "
                           "(margin {:.1f}%)",
                           cloud, vhfl, hfl, local, 100.0 * margin) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC5: VHFL collapses onto HFL with an irrelevant, constant central branch.

Outcome Collapse() {
  Outcome out;
  datagen::SynthConfig sc;
  sc.num_clients = 1;
  sc.global_strength = 0.0;
  sc.seed = 5;
  const auto data = datagen::Generate(sc);
  fedcore::FederationConfig fc;
  fc.N = fc.K = 1;
  fc.E_l = 1;
  fc.seed = 5;

  DenseNet w0 = fedcore::InitialGlobalModel(fc, data.d_global);
  auto& last = w0.mutable_layers().back();
  last.activation = nnet::Activation::kRelu;
  last.weights.setZero();
  last.bias.setConstant(-1.0);
  const DenseNet local = fedcore::InitialLocalModel(fc, data.d_local, data.d_label, false);
  DenseNet wbar = local;
  auto& first = wbar.mutable_layers().front();
  Matrix widened = Matrix::Zero(first.out_dim(), fc.model.u0_dim + data.d_local);
  widened.rightCols(data.d_local) = first.weights;
  first.weights = widened;

  const auto v = fedcore::RunVhfl(fc, data, {w0, wbar}).trace;
  const auto h = fedcore::RunHfl(fc, data).trace;
  double worst = 0.0;
  bool same_len = v.epochs.size() == h.epochs.size();
  out.Require(same_len, "trace lengths differ");
  for (std::size_t i = 0; same_len && i < v.epochs.size(); ++i) {
    worst = std::max({worst, std::abs(v.epochs[i].train_mse - h.epochs[i].train_mse),
                      std::abs(v.epochs[i].test_mse - h.epochs[i].test_mse),
                      std::abs(v.epochs[i].test_error_ratio - h.epochs[i].test_error_ratio)});
    out.Require(v.epochs[i].k_received == h.epochs[i].k_received, "k_received differs");
  }
  out.Require(worst <= 1e-10, fmt::format("max trace difference {:.2e}", worst));
  out.detail = fmt::format("{} epochs, max element-wise difference {:.2e}", v.epochs.size(), worst) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC6: K and E_l trends.

Outcome Trends() {
  Outcome out;
  harness::ExperimentConfig kc = DefaultExperiment();
  kc.data.num_clients = 20;
  kc.federation.N = 20;
  kc.federation.K = 20;
  kc.sweep.el_values.clear();
  harness::ExperimentConfig ec = DefaultExperiment();
  ec.sweep.k_fractions.clear();

  // Runs that never reach the threshold count as T_g + 1, a lower bound on
  // their true value.
  std::string text;
  std::vector<double> k_means, e_means;
  for (const auto& s : harness::SummarizeSweep(harness::RunKElSweep(kc))) {
    k_means.push_back(s.mean_epochs_to_threshold);
    text += fmt::format(" K={}:{:.1f}", s.value, s.mean_epochs_to_threshold);
    if (s.unreached > 0) text += fmt::format("({} unreached)", s.unreached);
  }
  for (const auto& s : harness::SummarizeSweep(harness::RunKElSweep(ec))) {
    e_means.push_back(s.mean_epochs_to_threshold);
    text += fmt::format(" E_l={}:{:.1f}", s.value, s.mean_epochs_to_threshold);
    if (s.unreached > 0) text += fmt::format("({} unreached)", s.unreached);
  }
  out.Require(k_means.size() == 4 && e_means.size() == 4, "unexpected grid size");
  for (std::size_t i = 1; i < k_means.size(); ++i) {
    out.Require(k_means[i] <= k_means[i - 1], "epochs-to-threshold increased with K");
  }
  for (std::size_t i = 1; i < e_means.size(); ++i) {
    out.Require(e_means[i] < e_means[i - 1], "rounds-to-threshold did not decrease with E_l");
  }
  for (std::size_t i = 2; i < e_means.size(); ++i) {
    const double second = e_means[i] - 2.0 * e_means[i - 1] + e_means[i - 2];
    out.Require(second >= 0.0, "marginal gain in E_l is not diminishing");
  }
  out.detail = "mean epochs to train MSE 0.1:" + text + (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC7: bound calculators.

bool BitEqual(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Outcome Bounds() {
  Outcome out;
  bounds::BoundParams p;
  p.L = 2.0;
  p.mu = 0.5;
  p.sigma2 = 3.0;
  p.sigma0_2 = 0.2;
  p.G2 = 1.5;
  p.lambda_niid = 1.4;
  p.f_init = 5.0;
  p.f_star = 0.5;
  p.f0 = 40.0;
  p.E_l = 5;
  p.K = 10;
  p.T_g = 100;

  bounds::BoundParams clean = p;
  clean.lambda_niid = 1.0;
  clean.sigma0_2 = clean.sigma2 = 0.0;
  out.Require(bounds::NonconvexBound(clean) == 2.0 * (p.f_init - p.f_star) / std::sqrt(500.0),
              "noise-free nonconvex bound");
  out.Require(std::abs(bounds::ConvexBound(clean) -
                       (1.0 / 100.0) * (2.0 * p.L / (p.mu * p.mu)) * (p.f0 * p.G2 / 20.0)) <
                  1e-15,
              "noise-free convex bound");
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 64; ++k) {
    bounds::BoundParams q = p;
    q.K = k;
    const double b = bounds::NonconvexBound(q);
    out.Require(b < prev, "nonconvex bound not decreasing in K");
    prev = b;
  }
  bounds::BoundParams twice = p;
  twice.T_g = 2 * p.T_g;
  out.Require(std::abs(bounds::NonconvexBound(twice) / bounds::NonconvexBound(p) -
                       1.0 / std::sqrt(2.0)) < 1e-9,
              "nonconvex T_g ratio");
  out.Require(BitEqual(bounds::ConvexBound(twice), bounds::ConvexBound(p) / 2.0),
              "convex bound not halved");
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int el = 1; el <= 60; ++el) {
    bounds::BoundParams q = p;
    q.E_l = el;
    if (bounds::ConvexBound(q) < best_val) {
      best_val = bounds::ConvexBound(q);
      best = el;
    }
  }
  out.Require(best > 1 && best < 60, "no interior E_l minimizer");
  const auto unit = bounds::LossyBounds(p);
  out.Require(BitEqual(unit.nonconvex, bounds::NonconvexBound(p)) &&
                  BitEqual(unit.convex, bounds::ConvexBound(p)),
              "gamma = 1 differs from lossless");
  bounds::BoundParams lossy = p, five = p;
  lossy.gamma = 0.5;
  five.K = 5;
  const auto l = bounds::LossyBounds(lossy);
  out.Require(BitEqual(l.nonconvex, bounds::NonconvexBound(five)) &&
                  BitEqual(l.convex, bounds::ConvexBound(five)),
              "K=10, gamma=0.5 differs from K=5");
  auto last = unit;
  for (double g : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    bounds::BoundParams q = p;
    q.gamma = g;
    const auto b = bounds::LossyBounds(q);
    out.Require(b.nonconvex > last.nonconvex && b.convex > last.convex,
                "bound did not grow as gamma fell");
    last = b;
  }
  out.detail = fmt::format("examples exact, K=10/gamma=.5 == K=5 bit-exact, E_l* = {}", best) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC8: byte-identical reruns of every experiment family.

std::map<std::string, std::string> CsvFiles(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      files[std::filesystem::relative(e.path(), dir).string()] = s.str();
    }
  }
  return files;
}

Outcome Determinism() {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / fmt::format("vhfl_acceptance_{}", ::getpid());
  fs::remove_all(root);
  harness::ExperimentConfig base = DefaultExperiment();
  base.seeds = {1, 2};
  base.data.samples_per_client = 60;
  base.federation.T_g = 8;
  base.queue.simulate_jobs = 100000;
  base.queue.gamma_targets = {0.5, 0.9, 0.99};
  base.bounds.sweeps = {{"K", {1, 2, 5, 10}}, {"gamma", {1.0, 0.5, 0.25}}};
  base.sweep.el_values = {1, 2};
  base.channel = harness::ChannelSpec{std::nullopt, 0.8};
  base.workers = 2;
  int files = 0;
  using M = harness::ExperimentMode;
  for (M mode : {M::kCompare, M::kSweep, M::kQueueAnalyze, M::kQueueSimulate, M::kDelayPlan,
                 M::kBoundsSweep}) {
    harness::ExperimentConfig c = base;
    c.mode = mode;
    const std::string name(harness::ExperimentModeName(mode));
    c.output_dir = (root / (name + "_a")).string();
    harness::RunExperiment(c);
    c.output_dir = (root / (name + "_b")).string();
    harness::RunExperiment(c);
    const auto a = CsvFiles(root / (name + "_a"));
    const auto b = CsvFiles(root / (name + "_b"));
    out.Require(!a.empty() && a == b, name + " CSVs differ");
    files += static_cast<int>(a.size());
  }
  fs::remove_all(root);
  out.detail = fmt::format("{} CSV files across 6 experiment families identical on rerun", files) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

// ---------------------------------------------------------------------------
// AC9: non-i.i.d. metric.

Outcome NonIid() {
  Outcome out;
  Rng rng(99);
  double worst_one = 0.0, worst_n = 0.0, worst_scale = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const std::vector<double> uniform(n, 1.0 / n);
    const Vector g = testing::RandomMatrix(7, 1, rng).col(0);
    std::vector<Vector> same(n, g);
    std::vector<double> q(n);
    double total = 0.0;
    for (double& w : q) total += (w = 0.1 + std::uniform_real_distribution<double>(0, 1)(rng));
    for (double& w : q) w /= total;
    worst_one = std::max(worst_one, std::abs(*datagen::EstimateLambda(same, q) - 1.0));

    std::vector<Vector> basis;
    for (int j = 0; j < n; ++j) basis.push_back(3.0 * Vector::Unit(n, j));
    worst_n = std::max(worst_n, std::abs(*datagen::EstimateLambda(basis, uniform) - n));

    std::vector<Vector> rnd, scaled;
    for (int j = 0; j < n; ++j) {
      rnd.push_back(testing::RandomMatrix(5, 1, rng).col(0));
      scaled.push_back(37.5 * rnd.back());
    }
    const double a = *datagen::EstimateLambda(rnd, q);
    worst_scale = std::max(worst_scale, std::abs(*datagen::EstimateLambda(scaled, q) - a) / a);
  }
  out.Require(worst_one < 1e-12, fmt::format("identical gradients off by {:.1e}", worst_one));
  out.Require(worst_n < 1e-12, fmt::format("orthogonal gradients off by {:.1e}", worst_n));
  out.Require(worst_scale < 1e-12, fmt::format("scale change moved lambda by {:.1e}", worst_scale));
  out.detail = fmt::format("N=2..12: |L-1| {:.1e}, |L-N| {:.1e}, scale drift {:.1e}", worst_one,
                           worst_n, worst_scale) +
               (out.ok ? "" : " -- " + out.detail);
  return out;
}

struct Criterion {
  const char* id;
  const char* name;
  double limit_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace vhfl

int main() {
  using namespace vhfl;
  const Criterion criteria[] = {
      {"AC1", "gradient exactness", 10.0, GradientExactness},
      {"AC2", "queue formula vs Monte Carlo", 60.0, QueueVersusMonteCarlo},
      {"AC3", "deadline planner", 5.0, DeadlinePlanner},
      {"AC4", "baseline ordering", 300.0, BaselineOrdering},
      {"AC5", "VHFL-HFL collapse", 60.0, Collapse},
      {"AC6", "K and E_l trends", 600.0, Trends},
      {"AC7", "bound calculators", 1.0, Bounds},
      {"AC8", "determinism", 0.0, Determinism},
      {"AC9", "non-iid metric", 0.0, NonIid},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && secs >= c.limit_seconds) {
      o.ok = false;
      o.detail += fmt::format(" -- over the {} s budget", c.limit_seconds);
    }
    failed += o.ok ? 0 : 1;
    fmt::print("{} {} {}: {} ({:.2f} s)\n", c.id, o.ok ? "PASS" : "FAIL", c.name, o.detail, secs);
    std::fflush(stdout);
  }
  fmt::print("{} of {} acceptance criteria passed\n", std::size(criteria) - failed,
             std::size(criteria));
  return failed == 0 ? 0 : 1;
}
