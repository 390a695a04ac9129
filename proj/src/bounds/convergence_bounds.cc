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

#include "vhfl/bounds/convergence_bounds.h"

#include <cmath>
#include <fmt/format.h>

#include "vhfl/errors.h"

namespace vhfl::bounds {
namespace {

void Require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ValidationError(fmt::format("BoundParams.{}: {}", field, rule));
}

// E_l sigma0^2 + (sigma^2 / k)(1/E_l + (lambda-1) L) + (lambda-1) L E_l G^2.
// k is a double so that K and gamma only ever enter as their product.
double Bracket(const BoundParams& p, double k) {
  const double el = p.E_l;
  const double drift = (p.lambda_niid - 1.0) * p.L;
  return el * p.sigma0_2 + (p.sigma2 / k) * (1.0 / el + drift) + drift * el * p.G2;
}

double Nonconvex(const BoundParams& p, double k) {
  const double el = p.E_l;
  const double tg = p.T_g;
  return 2.0 * (p.f_init - p.f_star) / std::sqrt(tg * el) +
         (p.L * std::sqrt(el) / std::sqrt(tg)) * Bracket(p, k);
}

double Convex(const BoundParams& p, double k) {
  const double el = p.E_l;
  const double x = (2.0 * p.L / (p.mu * p.mu)) * (Bracket(p, k) + p.f0 * p.G2 / (4.0 * el));
  return x / static_cast<double>(p.T_g);
}

}  // namespace

void BoundParams::Validate() const {
  Require(std::isfinite(L) && L > 0.0, "L", "must be finite and > 0");
  Require(std::isfinite(mu) && mu > 0.0, "mu", "must be finite and > 0");
  Require(std::isfinite(sigma2) && sigma2 >= 0.0, "sigma2", "must be finite and >= 0");
  Require(std::isfinite(sigma0_2) && sigma0_2 >= 0.0, "sigma0_2", "must be finite and >= 0");
  Require(std::isfinite(G2) && G2 >= 0.0, "G2", "must be finite and >= 0");
  Require(std::isfinite(lambda_niid) && lambda_niid >= 1.0, "lambda_niid",
          "must be finite and >= 1");
  Require(std::isfinite(f_init) && std::isfinite(f_star), "f_init", "must be finite");
  Require(f_init >= f_star, "f_init", "must be >= f_star");
  Require(std::isfinite(f0) && f0 >= 0.0, "f0", "must be finite and >= 0");
  Require(E_l >= 1, "E_l", "must be >= 1");
  Require(K >= 1, "K", "must be >= 1");
  Require(T_g >= 1, "T_g", "must be >= 1");
  Require(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0, "gamma", "must lie in (0, 1]");
}

double NonconvexBound(const BoundParams& p) {
  p.Validate();
  return Nonconvex(p, static_cast<double>(p.K));
}

double ConvexBound(const BoundParams& p) {
  p.Validate();
  return Convex(p, static_cast<double>(p.K));
}

BoundPair LossyBounds(const BoundParams& p) {
  p.Validate();
  const double k = static_cast<double>(p.K) * p.gamma;
  return {Nonconvex(p, k), Convex(p, k)};
}

std::vector<SweepRow> Sweep(const BoundParams& base, const std::string& param,
                            const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    BoundParams p = base;
    auto as_int = [&](int& field) {
      if (!(std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9)) {
        throw ValidationError(fmt::format("sweep over {} needs integer values, got {}", param, v));
      }
      field = static_cast<int>(v);
    };
    if (param == "L") p.L = v;
    else if (param == "mu") p.mu = v;
    else if (param == "sigma2") p.sigma2 = v;
    else if (param == "sigma0_2") p.sigma0_2 = v;
    else if (param == "G2") p.G2 = v;
    else if (param == "lambda_niid") p.lambda_niid = v;
    else if (param == "f_init") p.f_init = v;
    else if (param == "f_star") p.f_star = v;
    else if (param == "f0") p.f0 = v;
    else if (param == "gamma") p.gamma = v;
    else if (param == "E_l") as_int(p.E_l);
    else if (param == "K") as_int(p.K);
    else if (param == "T_g") as_int(p.T_g);
    else throw ValidationError(fmt::format("unknown bound parameter '{}'", param));
    const BoundPair b = LossyBounds(p);
    rows.push_back({param, v, b.nonconvex, b.convex});
  }
  return rows;
}

}  // namespace vhfl::bounds
