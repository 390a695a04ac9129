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

#ifndef VHFL_BOUNDS_CONVERGENCE_BOUNDS_H_
#define VHFL_BOUNDS_CONVERGENCE_BOUNDS_H_

#include <string>
#include <vector>

namespace vhfl::bounds {

// Constants of the convergence bounds. gamma is the upload success rate; the
// lossless bounds ignore it.
struct BoundParams {
  double L = 1.0;
  double mu = 1.0;
  double sigma2 = 1.0;
  double sigma0_2 = 0.0;
  double G2 = 1.0;
  double lambda_niid = 1.0;
  double f_init = 1.0;
  double f_star = 0.0;
  double f0 = 1.0;
  int E_l = 1;
  int K = 1;
  int T_g = 1;
  double gamma = 1.0;

  // Throws ValidationError naming the first offending field.
  void Validate() const;
};

// Non-convex (gradient-norm) bound after T_g global epochs.
double NonconvexBound(const BoundParams& p);

// Convex (PL) optimality-gap bound after T_g global epochs.
double ConvexBound(const BoundParams& p);

struct BoundPair {
  double nonconvex = 0.0;
  double convex = 0.0;
};

// Both bounds with the effective client count K * gamma.
BoundPair LossyBounds(const BoundParams& p);

// One row of a sweep over a single parameter.
struct SweepRow {
  std::string param;
  double value = 0.0;
  double nonconvex = 0.0;
  double convex = 0.0;
};

// Sweeps one named parameter over values, holding the rest of base fixed.
// Uses the lossy bounds, so gamma always participates. Integer parameters
// (E_l, K, T_g) must be given integral values.
std::vector<SweepRow> Sweep(const BoundParams& base, const std::string& param,
                            const std::vector<double>& values);

}  // namespace vhfl::bounds

#endif  // VHFL_BOUNDS_CONVERGENCE_BOUNDS_H_
