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

// (epsilon, delta) accountant for FA-LD: Gaussian mechanism per local step,
// K-fold local composition, device-sampling amplification and composition
// over communication rounds.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fald/engine.hpp"

namespace fald {

struct DpParams {
  double delta_l = 1.0;  // l2-sensitivity of a per-example gradient
  double q = 1.0;        // minibatch fraction
  double eta = 1e-4;
  double tau = 1.0;
  double rho = 0.0;      // must be < 1
  double min_pc = 1.0;
  std::size_t K = 1;
  std::uint64_t T = 1;
  std::size_t S = 1;
  std::size_t N = 1;
  // kFull is accounted as scheme II with S = N.
  SchemeKind scheme = SchemeKind::kSchemeII;
  double delta0 = 1e-5;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

struct DpBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  bool clamped = false;  // delta exceeded 1 and was clamped
};

void ValidateDpParams(const DpParams& p);

// tau (1 - rho^2) q^2 min_pc / (delta_l^2 ln(1.25 / delta0)).
double EtaMaxDp(const DpParams& p);

// 2 delta_l sqrt(eta ln(1.25 / delta0) / (tau (1 - rho^2) min_pc)).
// Throws when eta exceeds EtaMaxDp.
double EpsilonOne(const DpParams& p);

// eps_K = eps1 min(sqrt(2K ln(1/delta1)) + K (e^eps1 - 1), K);
// delta_K = K q delta0 + delta1. delta1 = 0 selects the K branch.
DpBudget ComposeLocal(double epsilon1, std::size_t K, double q, double delta0, double delta1);

// Device-sampling amplification of one round's (eps_K, delta_K).
DpBudget AmplifyScheme(double epsilon_k, SchemeKind scheme, std::size_t S, std::size_t N,
                       std::size_t K, double q, double delta0, double delta1);

// eps = min(sqrt(2E ln(1/delta2)) eps~ + E eps~ (e^eps~ - 1), E eps~);
// delta = E delta~ + delta2, with E = rounds. delta2 = 0 selects the linear branch.
DpBudget ComposeRounds(double eps_tilde, double delta_tilde, std::uint64_t rounds,
                       double delta2);

// Scheme II form eps~ min(sqrt(2E ln(1/delta2)) + E (S/N)(e^eps_K - 1), E).
double ComposeRoundsSchemeII(double eps_tilde, double epsilon_k, std::size_t S,
                             std::size_t N, std::uint64_t rounds, double delta2);

struct DpReport {
  double eta_max = 0.0;
  double epsilon1 = 0.0;
  DpBudget local;
  DpBudget amplified;
  DpBudget total;
  double epsilon_scheme2_form = 0.0;
};

// epsilon_one -> compose_local -> amplify_scheme -> compose_rounds.
DpReport Account(const DpParams& p);

struct BudgetChoice {
  double rho = 0.0;
  std::size_t S = 0;
  DpBudget budget;
};

// rho grid searched by BudgetSearch, ascending.
const std::vector<double>& RhoGrid();

// Largest rho, then largest S, meeting both budgets; inadmissible eta is
// skipped. A full-device base is searched as scheme II.
std::optional<BudgetChoice> BudgetSearch(double eps_star, double delta_star, const DpParams& base);

}  // namespace fald
