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

#ifndef VHFL_NETQUEUE_HE2_QUEUE_H_
#define VHFL_NETQUEUE_HE2_QUEUE_H_

#include "vhfl/random.h"

namespace vhfl::netqueue {

// M/G/1 upload queue with Poisson arrivals and a two-branch hyper-exponential
// service time: with probability alpha1 the link is idle and serves at rate
// mu1, otherwise it is busy and serves at mu2 (< mu1).
struct He2Params {
  double lambda_n = 2.0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double mu1 = 8.0;
  double mu2 = 2.0;

  // alpha1 * lambda / mu1 + alpha2 * lambda / mu2
  double Utilization() const;
  // Throws ValidationError when the weights do not sum to one, the rates are
  // not ordered mu1 > mu2 > 0, or the queue is unstable (utilization >= 1).
  void Validate() const;
};

// Derived quantities of the sojourn-time transform
//   D(s) = (1 - rho)(mu12 s + mu1 mu2) / ((s - s1)(s - s2)),  s2 < s1 < 0.
struct QueueAnalysis {
  He2Params params;
  double rho = 0.0;
  double mu12 = 0.0;  // alpha1 mu1 + alpha2 mu2
  double s1 = 0.0;
  double s2 = 0.0;
};

QueueAnalysis Analyze(const He2Params& params);

// Sojourn-time density W(t), t >= 0.
double SojournPdf(const QueueAnalysis& q, double t);

// Mean sojourn time, the first moment of W.
double MeanSojourn(const QueueAnalysis& q);

// P(sojourn <= t_p): the probability that an upload beats the deadline.
// Accepts t_p = +infinity.
double SuccessRate(const QueueAnalysis& q, double t_p);

// Smallest deadline whose success rate is gamma_target, to within `tol` in
// probability, by doubling a bracket from 1/|s1| and bisecting.
// Throws ValidationError unless 0 < gamma_target < 1 and tol > 0.
double RequiredDeadline(const QueueAnalysis& q, double gamma_target, double tol = 1e-6);

// One stationary sojourn time, by acceptance-rejection against the positive
// part of the two-exponential density.
double SampleSojourn(const QueueAnalysis& q, Rng& rng);

}  // namespace vhfl::netqueue

#endif  // VHFL_NETQUEUE_HE2_QUEUE_H_
