/*
 * Copyright 2026 The fald Authors
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

#pragma once

// Convergence bounds and planning rules for FA-LD, evaluated literally.

#include <cstddef>
#include <cstdint>

#include "fald/engine.hpp"

namespace fald {

struct BoundInputs {
  double L = 1.0;
  double m = 1.0;
  double kappa = 1.0;
  double D = 0.0;
  double gamma_het = 0.0;
  double sigma_sg = 0.0;
  double tau = 1.0;
  std::size_t d = 1;
  std::size_t K = 1;
  double rho = 0.0;
  std::size_t N = 1;
  std::size_t S = 1;
  SchemeKind scheme = SchemeKind::kFull;
  double eta = 0.0;
  double min_pc = 1.0;
};

// Fills L, m, kappa, D, gamma_het, sigma_sg from model constants.
BoundInputs InputsFromConstants(const EnergyConstants& k, std::size_t d, double min_pc);

// Checks 0 < m <= L, K >= 1, d >= 1, rho in [0, 1], 0 < min_pc <= 1.
void ValidateBoundInputs(const BoundInputs& in);

// tau (rho^2 + (1 - rho^2) / p_c).
double Temperature(double tau, double rho, double p_c);

// D^2 + max_c T_{c,rho} / m + gamma^2 / (m^2 d) + sigma^2 / m^2.
double HRho(const BoundInputs& in);

// Largest step for which the fixed-step bounds are claimed: 1 / (2L).
double EtaLimit(const BoundInputs& in);

// (1 - eta m / 4)^k sqrt(2d)(D + sqrt(tau / m))
//   + 30 kappa sqrt(eta m d) sqrt(((K - 1)^2 + kappa) H_rho).
// k counts iterations. Throws unless eta lies in (0, 1/(2L)].
double BoundFullFixed(const BoundInputs& in, double k);
// The k -> infinity part of BoundFullFixed.
double BoundFullFixedAsymptote(const BoundInputs& in);

// 45 kappa sqrt(((K - 1)^2 + kappa) H_0) sqrt(eta_k m d), eta_k = 1/(2L + mk/12).
double BoundDecaying(const BoundInputs& in, double k);

// x / (1 - exp(-x / 2)); the limit 2 at x = 0.
double CK(double x);
// 1 for scheme I, (N - S) / (N - 1) for scheme II (0 when N = 1).
double CS(SchemeKind scheme, std::size_t N, std::size_t S);

// First term of BoundFullFixed, K^2 in the middle term, plus
// 2 sqrt(C_K d tau / (S m) (rho^2 + N (1 - rho^2)) C_S).
double BoundPartial(const BoundInputs& in, double k);

struct StepPlan {
  double eta = 0.0;
  std::uint64_t iterations = 0;  // multiple of K
  std::uint64_t rounds = 0;
};

// eta = min(1/(2L), eta solving 30 kappa sqrt(eta m d) sqrt((K^2 + kappa) H) = eps/2);
// iterations = least multiple of K with exp(-eta m T / 4) sqrt(2d)(D + sqrt(tau/m)) <= eps/2.
StepPlan PlanSteps(double epsilon, const BoundInputs& in);

// argmin over K >= 1 of K + kappa / K, ties to the smaller K.
std::size_t OptimalLocalSteps(double kappa);

}  // namespace fald
