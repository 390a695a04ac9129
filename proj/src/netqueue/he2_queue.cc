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

#include "vhfl/netqueue/he2_queue.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::netqueue {
namespace {

constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxBisections = 400;

// W(t) = a e^{s1 t} + b e^{s2 t}
struct TwoExponentials {
  double a;
  double b;
};

TwoExponentials Coefficients(const QueueAnalysis& q) {
  const double mm = q.params.mu1 * q.params.mu2;
  const double scale = (1.0 - q.rho) / (q.s1 - q.s2);
  return {scale * (q.mu12 * q.s1 + mm), -scale * (q.mu12 * q.s2 + mm)};
}

}  // namespace

double He2Params::Utilization() const {
  return alpha1 * lambda_n / mu1 + alpha2 * lambda_n / mu2;
}

void He2Params::Validate() const {
  if (!(lambda_n > 0.0) || !std::isfinite(lambda_n))
    throw ValidationError(fmt::format("arrival rate must be positive, got {}", lambda_n));
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0))
    throw ValidationError("branch probabilities must be >= 0");
  if (std::abs(alpha1 + alpha2 - 1.0) > 1e-12)
    throw ValidationError(fmt::format("alpha1 + alpha2 = {}, expected 1", alpha1 + alpha2));
  if (!(mu2 > 0.0) || !(mu1 > mu2) || !std::isfinite(mu1))
    throw ValidationError(fmt::format("service rates must satisfy mu1 > mu2 > 0, got {} and {}",
                                      mu1, mu2));
  const double rho = Utilization();
  if (!(rho < 1.0))
    throw ValidationError(fmt::format("unstable queue: utilization {} >= 1", rho));
}

QueueAnalysis Analyze(const He2Params& p) {
  p.Validate();
  QueueAnalysis q;
  q.params = p;
  q.rho = p.Utilization();
  q.mu12 = p.alpha1 * p.mu1 + p.alpha2 * p.mu2;
  const double lam = p.lambda_n;
  const double disc = p.mu1 * p.mu1 + p.mu2 * p.mu2 + lam * lam - 2.0 * p.mu1 * p.mu2 +
                      2.0 * lam * p.mu1 + 2.0 * lam * p.mu2 - 4.0 * q.mu12 * lam;
  if (!(disc > 0.0))
    throw ValidationError(fmt::format("degenerate queue: repeated transform pole (disc={})", disc));
  const double root = std::sqrt(disc);
  q.s1 = 0.5 * ((lam - p.mu1 - p.mu2) + root);
  q.s2 = 0.5 * ((lam - p.mu1 - p.mu2) - root);
  if (!(q.s2 < q.s1 && q.s1 < 0.0))
    throw ValidationError(fmt::format("transform poles not negative: s1={} s2={}", q.s1, q.s2));
  return q;
}

double SojournPdf(const QueueAnalysis& q, double t) {
  if (!(t >= 0.0)) throw ValidationError(fmt::format("sojourn density at t={} < 0", t));
  const TwoExponentials c = Coefficients(q);
  return c.a * std::exp(q.s1 * t) + c.b * std::exp(q.s2 * t);
}

double MeanSojourn(const QueueAnalysis& q) {
  const double mm = q.params.mu1 * q.params.mu2;
  const double a = (1.0 - q.rho) * (q.mu12 * q.s1 + mm) / (q.s1 - q.s2);
  const double b = -(1.0 - q.rho) * (q.mu12 * q.s2 + mm) / (q.s1 - q.s2);
  return a / (q.s1 * q.s1) + b / (q.s2 * q.s2);
}

double SuccessRate(const QueueAnalysis& q, double t_p) {
  if (!(t_p >= 0.0)) throw ValidationError(fmt::format("deadline t_p={} < 0", t_p));
  const TwoExponentials c = Coefficients(q);
  const double gamma =
      1.0 + c.a / q.s1 * std::exp(q.s1 * t_p) + c.b / q.s2 * std::exp(q.s2 * t_p);
  return std::clamp(gamma, 0.0, 1.0);
}

double RequiredDeadline(const QueueAnalysis& q, double gamma_target, double tol) {
  if (!(gamma_target > 0.0 && gamma_target < 1.0))
    throw ValidationError(
        fmt::format("target success rate must lie in (0, 1), got {}", gamma_target));
  if (!(tol > 0.0)) throw ValidationError("bisection tolerance must be positive");
  double lo = 0.0;
  double hi = 1.0 / std::abs(q.s1);
  for (int i = 0; SuccessRate(q, hi) < gamma_target; ++i) {
    if (i == kMaxBracketDoublings)
      throw ValidationError(fmt::format("success rate {} unreachable", gamma_target));
    lo = hi;
    hi *= 2.0;
  }
  double mid = hi;
  for (int i = 0; i < kMaxBisections; ++i) {
    mid = 0.5 * (lo + hi);
    const double g = SuccessRate(q, mid);
    if (std::abs(g - gamma_target) <= tol) break;
    (g < gamma_target ? lo : hi) = mid;
  }
  return mid;
}

double SampleSojourn(const QueueAnalysis& q, Rng& rng) {
  const TwoExponentials c = Coefficients(q);
  const double a_pos = std::max(c.a, 0.0);
  const double b_pos = std::max(c.b, 0.0);
  const double mass_a = a_pos / -q.s1;
  const double mass_b = b_pos / -q.s2;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> slow(-q.s1);
  std::exponential_distribution<double> fast(-q.s2);
  while (true) {
    const double t = (u(rng) * (mass_a + mass_b) < mass_a) ? slow(rng) : fast(rng);
    const double envelope = a_pos * std::exp(q.s1 * t) + b_pos * std::exp(q.s2 * t);
    if (u(rng) * envelope <= SojournPdf(q, t)) return t;
  }
}

}  // namespace vhfl::netqueue
