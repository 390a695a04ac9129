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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "test_util.h"
#include "vhfl/errors.h"
#include "vhfl/netqueue/channel.h"
#include "vhfl/netqueue/he2_queue.h"
#include "vhfl/netqueue/simulation.h"

namespace vhfl::netqueue {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

He2Params Reference(double alpha1 = 0.5) { return {2.0, alpha1, 1.0 - alpha1, 8.0, 2.0}; }

// Pollaczek-Khinchine mean sojourn: E[S] + lambda E[S^2] / (2 (1 - rho)).
double PkMeanSojourn(const He2Params& p) {
  const double es = p.alpha1 / p.mu1 + p.alpha2 / p.mu2;
  const double es2 = 2.0 * p.alpha1 / (p.mu1 * p.mu1) + 2.0 * p.alpha2 / (p.mu2 * p.mu2);
  const double rho = p.lambda_n * es;
  return es + p.lambda_n * es2 / (2.0 * (1.0 - rho));
}

// Partial-fraction weights of the transform, recomputed here from the poles.
std::pair<double, double> Weights(const QueueAnalysis& q) {
  const double mm = q.params.mu1 * q.params.mu2;
  const double a = (1.0 - q.rho) * (q.mu12 * q.s1 + mm) / (q.s1 - q.s2);
  const double b = -(1.0 - q.rho) * (q.mu12 * q.s2 + mm) / (q.s1 - q.s2);
  return {a, b};
}

// Composite Simpson rule on [0, upper].
template <typename F>
double Simpson(F f, double upper, int intervals) {
  const double h = upper / intervals;
  double acc = f(0.0) + f(upper);
  for (int i = 1; i < intervals; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

He2Params RandomStable(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    He2Params p;
    p.mu2 = 0.1 + 5.0 * u(rng);
    p.mu1 = p.mu2 * (1.05 + 10.0 * u(rng));
    p.alpha1 = u(rng);
    p.alpha2 = 1.0 - p.alpha1;
    const double capacity = 1.0 / (p.alpha1 / p.mu1 + p.alpha2 / p.mu2);
    p.lambda_n = capacity * (0.02 + 0.95 * u(rng));
    if (p.Utilization() < 0.98) return p;
  }
}

TEST_CASE("analyze: reference parameters") {
  const QueueAnalysis q = Analyze(Reference());
  CHECK(q.rho == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(q.mu12 == 5.0);
  // Denominator s^2 + 8 s + 6 by hand: roots -4 +- sqrt(10).
  CHECK(std::abs(q.s1 - (-4.0 + std::sqrt(10.0))) < 1e-12);
  CHECK(std::abs(q.s2 - (-4.0 - std::sqrt(10.0))) < 1e-12);
  CHECK(q.s1 == doctest::Approx(-0.8377).epsilon(1e-4));
  CHECK(q.s2 == doctest::Approx(-7.1623).epsilon(1e-4));
}

TEST_CASE("analyze: single branch reduces to M/M/1") {
  const He2Params p{2.0, 1.0, 0.0, 8.0, 3.0};
  const QueueAnalysis q = Analyze(p);
  // One pole is -(mu1 - lambda); the other, -mu2, cancels against the
  // numerator zero of mu12 s + mu1 mu2 = mu1 (s + mu2).
  const bool has_mm1_pole =
      std::abs(q.s1 + (p.mu1 - p.lambda_n)) < 1e-12 || std::abs(q.s2 + (p.mu1 - p.lambda_n)) < 1e-12;
  const bool has_cancelled_pole = std::abs(q.s1 + p.mu2) < 1e-12 || std::abs(q.s2 + p.mu2) < 1e-12;
  CHECK(has_mm1_pole);
  CHECK(has_cancelled_pole);
  for (double s = 0.05; s < 20.0; s += 0.37) {
    const double d = (1.0 - q.rho) * (q.mu12 * s + p.mu1 * p.mu2) / ((s - q.s1) * (s - q.s2));
    // Full M/G/1 transform with exponential service B(s) = mu1 / (s + mu1).
    const double b = p.mu1 / (s + p.mu1);
    const double pk = b * (1.0 - q.rho) * s / (s - p.lambda_n + p.lambda_n * b);
    const double classical = (p.mu1 - p.lambda_n) / (s + p.mu1 - p.lambda_n);
    CHECK(std::abs(d - pk) < 1e-12);
    CHECK(std::abs(d - classical) < 1e-12);
  }
}

TEST_CASE("analyze: poles strictly negative for random stable parameters") {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const QueueAnalysis q = Analyze(RandomStable(rng));
    CHECK(q.s2 < q.s1);
    CHECK(q.s1 < 0.0);
    CHECK(q.rho > 0.0);
    CHECK(q.rho < 1.0);
  }
}

TEST_CASE("analyze: rejects invalid parameters") {
  CHECK_THROWS_AS(Analyze({2.0, 0.5, 0.5, 2.0, 8.0}), ValidationError);  // mu1 < mu2
  CHECK_THROWS_AS(Analyze({2.0, 0.6, 0.5, 8.0, 2.0}), ValidationError);  // weights
  CHECK_THROWS_AS(Analyze({4.0, 0.5, 0.5, 8.0, 2.0}), ValidationError);  // rho = 1.25
  CHECK_THROWS_AS(Analyze({0.0, 0.5, 0.5, 8.0, 2.0}), ValidationError);
  try {
    Analyze({3.5, 0.5, 0.5, 8.0, 2.0});
    FAIL("expected instability");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("unstable") != std::string::npos);
  }
}

TEST_CASE("analyze: pure and bit-reproducible") {
  const QueueAnalysis a = Analyze(Reference(0.3));
  const QueueAnalysis b = Analyze(Reference(0.3));
  CHECK(std::memcmp(&a.s1, &b.s1, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.s2, &b.s2, sizeof(double)) == 0);
  CHECK(SuccessRate(a, 1.7) == SuccessRate(b, 1.7));
  CHECK(SojournPdf(a, 0.4) == SojournPdf(b, 0.4));
}

TEST_CASE("sojourn pdf: normalized, non-negative, P-K mean") {
  for (double alpha1 : {0.25, 0.5, 0.75}) {
    const QueueAnalysis q = Analyze(Reference(alpha1));
    const auto [a, b] = Weights(q);
    CHECK(std::abs(-a / q.s1 - b / q.s2 - 1.0) < 1e-9);
    CHECK(std::abs(Simpson([&](double t) { return t * SojournPdf(q, t); }, 60.0 * MeanSojourn(q),
                           200000) - PkMeanSojourn(q.params)) < 1e-8);
    CHECK(std::abs(MeanSojourn(q) - PkMeanSojourn(q.params)) < 1e-12);

    const double mean = MeanSojourn(q);
    const double upper = 60.0 * mean;
    CHECK(std::abs(Simpson([&](double t) { return SojournPdf(q, t); }, upper, 200000) - 1.0) <
          1e-9);
    for (int i = 0; i <= 2000; ++i) CHECK(SojournPdf(q, 20.0 * mean * i / 2000.0) >= 0.0);
  }
  const QueueAnalysis ref = Analyze(Reference());
  CHECK(PkMeanSojourn(ref.params) == doctest::Approx(1.0208333333).epsilon(1e-9));
  CHECK_THROWS_AS(SojournPdf(ref, -0.1), ValidationError);
}

TEST_CASE("success rate: limits, reference value, monotone") {
  const QueueAnalysis q = Analyze(Reference());
  CHECK(SuccessRate(q, kInf) == 1.0);
  CHECK(SuccessRate(q, 1e6) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(SuccessRate(q, 0.0) < 1e-9);
  CHECK(SuccessRate(q, 1.0) == doctest::Approx(0.6381).epsilon(1e-4));
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double g = SuccessRate(q, 0.025 * i);
    CHECK(g > prev);
    prev = g;
  }
  CHECK_THROWS_AS(SuccessRate(q, -1.0), ValidationError);
}

TEST_CASE("success rate: reference value agrees with Monte Carlo") {
  const QueueAnalysis q = Analyze(Reference());
  const std::vector<double> samples = SimulateMg1(q.params, 400000, 3);
  CHECK(std::abs(EmpiricalGamma(samples, 1.0) - SuccessRate(q, 1.0)) < 0.01);
}

TEST_CASE("required deadline: round trip, monotone, superlinear") {
  const QueueAnalysis q = Analyze(Reference());
  for (double target : {0.5, 0.9, 0.99}) {
    const double tp = RequiredDeadline(q, target);
    CHECK(std::abs(SuccessRate(q, tp) - target) <= 1e-6);
  }
  const double t90 = RequiredDeadline(q, 0.9);
  const double t99 = RequiredDeadline(q, 0.99);
  CHECK(t90 < t99);
  CHECK(t99 / t90 > 0.99 / 0.9);
  CHECK_THROWS_AS(RequiredDeadline(q, 1.0), ValidationError);
  CHECK_THROWS_AS(RequiredDeadline(q, 0.0), ValidationError);
  CHECK_THROWS_AS(RequiredDeadline(q, 0.5, 0.0), ValidationError);
}

TEST_CASE("required deadline: more congestion never needs a shorter deadline") {
  for (double target : {0.5, 0.8, 0.95}) {
    double prev = 0.0;
    for (double alpha1 : {0.9, 0.75, 0.5, 0.35, 0.25}) {
      const double tp = RequiredDeadline(Analyze(Reference(alpha1)), target, 1e-9);
      CHECK(tp >= prev);
      prev = tp;
    }
  }
}

TEST_CASE("simulate: reproducible and P-K mean") {
  const He2Params p = Reference();
  CHECK(SimulateMg1(p, 1000, 5) == SimulateMg1(p, 1000, 5));
  CHECK(SimulateMg1(p, 1000, 5) != SimulateMg1(p, 1000, 6));
  CHECK(SimulateMg1(p, 1000, 5).size() == 990);
  const std::vector<double> s = SimulateMg1(p, 1000000, 11);
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  CHECK(std::abs(mean - 1.0208) < 0.02);
  CHECK_THROWS_AS(SimulateMg1({4.0, 0.5, 0.5, 8.0, 2.0}, 10, 1), ValidationError);
  CHECK_THROWS_AS(SimulateMg1(p, 0, 1), ValidationError);
}

TEST_CASE("simulate: equal rates give the M/M/1 exponential sojourn law") {
  const He2Params p{2.0, 0.5, 0.5, 5.0, 5.0};
  std::vector<double> s = SimulateMg1(p, 1000000, 21);
  std::sort(s.begin(), s.end());
  const double rate = p.mu1 - p.lambda_n;
  double ks = 0.0;
  const double n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = 1.0 - std::exp(-rate * s[i]);
    ks = std::max({ks, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("sampler: stationary draws follow the analytic law") {
  for (double alpha1 : {0.25, 0.75}) {
    const QueueAnalysis q = Analyze(Reference(alpha1));
    Rng rng(4);
    std::vector<double> s(200000);
    for (double& v : s) v = SampleSojourn(q, rng);
    std::sort(s.begin(), s.end());
    double ks = 0.0;
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double cdf = SuccessRate(q, s[i]);
      ks = std::max({ks, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
    }
    CHECK(ks < 0.005);
  }
}

TEST_CASE("channel: deadline extremes and binomial mean") {
  ChannelModel ch{Reference(), 0.0, 9};
  CHECK(ApplyChannel(ch, 10, 0).empty());
  ch.t_p = kInf;
  CHECK(ApplyChannel(ch, 10, 0).size() == 10);

  ch.t_p = RequiredDeadline(Analyze(ch.params), 0.7, 1e-9);
  double delivered = 0.0;
  const int epochs = 20000;
  for (int e = 0; e < epochs; ++e) delivered += static_cast<double>(ApplyChannel(ch, 10, e).size());
  CHECK(std::abs(delivered / epochs - 7.0) < 0.1);
  CHECK(ApplyChannel(ch, 10, 3) == ApplyChannel(ch, 10, 3));

  ch.t_p = -1.0;
  CHECK_THROWS_AS(ch.Validate(), ValidationError);
}

}  // namespace
}  // namespace vhfl::netqueue
