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

#include "fald/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fald/error.hpp"

namespace fald {

void ValidateDpParams(const DpParams& p) {
  auto bad = [](const std::string& msg) { Fail(ErrorCode::kInvalidArgument, msg); };
  if (!(p.delta_l > 0.0) || !std::isfinite(p.delta_l)) bad("sensitivity delta_l must be > 0");
  if (!(p.q > 0.0 && p.q <= 1.0)) bad(fmt::format("q must lie in (0, 1], got {}", p.q));
  if (!(p.eta >= 0.0) || !std::isfinite(p.eta)) bad("eta must be >= 0");
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) bad("tau must be > 0");
  if (!(p.rho >= 0.0)) bad("rho must be >= 0");
  if (!(p.rho < 1.0)) {
    bad("rho must be < 1 for privacy: rho = 1 removes the private noise channel");
  }
  if (!(p.min_pc > 0.0 && p.min_pc <= 1.0)) bad("min p_c must lie in (0, 1]");
  if (p.K < 1) bad("K must be >= 1");
  if (p.T < p.K || p.T % p.K != 0) bad(fmt::format("T = {} must be a positive multiple of K = {}", p.T, p.K));
  if (p.N < 1) bad("N must be >= 1");
  if (p.scheme != SchemeKind::kFull && (p.S < 1 || p.S > p.N)) {
    bad(fmt::format("S = {} must lie in [1, N = {}]", p.S, p.N));
  }
  if (!(p.delta0 > 0.0 && p.delta0 < 1.0)) bad("delta0 must lie in (0, 1)");
  if (!(p.delta1 >= 0.0 && p.delta1 < 1.0)) bad("delta1 must lie in [0, 1)");
  if (!(p.delta2 >= 0.0 && p.delta2 < 1.0)) bad("delta2 must lie in [0, 1)");
}

double EtaMaxDp(const DpParams& p) {
  if (!(p.rho < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "rho = 1 leaves no private noise: admissible eta is 0");
  }
  return p.tau * (1.0 - p.rho * p.rho) * p.q * p.q * p.min_pc /
         (p.delta_l * p.delta_l * std::log(1.25 / p.delta0));
}

double EpsilonOne(const DpParams& p) {
  const double eta_max = EtaMaxDp(p);
  if (p.eta > eta_max) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("eta = {} exceeds the admissible maximum eta_max = {}", p.eta, eta_max));
  }
  return 2.0 * p.delta_l *
         std::sqrt(p.eta * std::log(1.25 / p.delta0) /
                   (p.tau * (1.0 - p.rho * p.rho) * p.min_pc));
}

DpBudget ComposeLocal(double epsilon1, std::size_t K, double q, double delta0, double delta1) {
  if (K < 1) Fail(ErrorCode::kInvalidArgument, "K must be >= 1");
  const double k = static_cast<double>(K);
  double factor = k;
  if (delta1 > 0.0) {
    factor = std::min(std::sqrt(2.0 * k * std::log(1.0 / delta1)) + k * std::expm1(epsilon1), k);
  }
  return {epsilon1 * factor, k * q * delta0 + delta1, false};
}

DpBudget AmplifyScheme(double epsilon_k, SchemeKind scheme, std::size_t S, std::size_t N,
                       std::size_t K, double q, double delta0, double delta1) {
  if (scheme == SchemeKind::kFull) S = N;
  if (S < 1 || S > N) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("S = {} must lie in [1, N = {}]", S, N));
  }
  const double k = static_cast<double>(K);
  const double n = static_cast<double>(N);
  const double s_count = static_cast<double>(S);
  DpBudget out;
  if (scheme != SchemeKind::kSchemeI) {
    const double rate = s_count / n;
    out.epsilon = S == N ? epsilon_k : std::log1p(rate * std::expm1(epsilon_k));
    out.delta = rate * (k * q * delta0 + delta1);
    return out;
  }
  // Probability that a given client is drawn at least once in S draws.
  const double hit = -std::expm1(s_count * std::log1p(-1.0 / n));
  out.epsilon = std::log1p(hit * std::expm1(epsilon_k));
  const double log_p = -std::log(n);
  const double log_q = std::log1p(-1.0 / n);
  double delta = 0.0;
  for (std::size_t s = 1; s <= S; ++s) {
    const double sd = static_cast<double>(s);
    const double log_choose = std::lgamma(s_count + 1.0) - std::lgamma(sd + 1.0) -
                              std::lgamma(s_count - sd + 1.0);
    const double log_tail = N == 1 ? (s == S ? 0.0 : -INFINITY) : (s_count - sd) * log_q;
    const double weight = std::exp(log_choose + sd * log_p + log_tail);
    const double base = 1.25 * k * q * std::pow(delta0 / 1.25, 1.0 / (sd * sd)) + delta1;
    const double ds = epsilon_k < 1e-12 ? sd * base
                                        : std::expm1(epsilon_k) * base / std::expm1(epsilon_k / sd);
    delta += weight * ds;
  }
  out.delta = delta;
  return out;
}

DpBudget ComposeRounds(double eps_tilde, double delta_tilde, std::uint64_t rounds,
                       double delta2) {
  if (rounds < 1) Fail(ErrorCode::kInvalidArgument, "need at least one round");
  const double e = static_cast<double>(rounds);
  double eps = e * eps_tilde;
  if (delta2 > 0.0) {
    eps = std::min(std::sqrt(2.0 * e * std::log(1.0 / delta2)) * eps_tilde +
                       e * eps_tilde * std::expm1(eps_tilde),
                   eps);
  }
  return {eps, e * delta_tilde + delta2, false};
}

double ComposeRoundsSchemeII(double eps_tilde, double epsilon_k, std::size_t S, std::size_t N,
                             std::uint64_t rounds, double delta2) {
  if (rounds < 1) Fail(ErrorCode::kInvalidArgument, "need at least one round");
  const double e = static_cast<double>(rounds);
  if (delta2 <= 0.0) return eps_tilde * e;
  const double rate = static_cast<double>(S) / static_cast<double>(N);
  return eps_tilde *
         std::min(std::sqrt(2.0 * e * std::log(1.0 / delta2)) + e * rate * std::expm1(epsilon_k), e);
}

DpReport Account(const DpParams& p) {
  ValidateDpParams(p);
  DpReport r;
  r.eta_max = EtaMaxDp(p);
  r.epsilon1 = EpsilonOne(p);
  r.local = ComposeLocal(r.epsilon1, p.K, p.q, p.delta0, p.delta1);
  const std::size_t S = p.scheme == SchemeKind::kFull ? p.N : p.S;
  r.amplified = AmplifyScheme(r.local.epsilon, p.scheme, S, p.N, p.K, p.q, p.delta0, p.delta1);
  const std::uint64_t rounds = p.T / p.K;
  r.total = ComposeRounds(r.amplified.epsilon, r.amplified.delta, rounds, p.delta2);
  r.epsilon_scheme2_form =
      ComposeRoundsSchemeII(r.amplified.epsilon, r.local.epsilon, S, p.N, rounds, p.delta2);
  if (r.total.delta > 1.0) {
    r.total.delta = 1.0;
    r.total.clamped = true;
  }
  return r;
}

const std::vector<double>& RhoGrid() {
  static const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                           0.7, 0.8, 0.9, 0.95, 0.99};
  return grid;
}

std::optional<BudgetChoice> BudgetSearch(double eps_star, double delta_star, const DpParams& base) {
  if (!(eps_star >= 0.0) || !(delta_star >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "privacy budgets must be >= 0");
  }
  const auto& grid = RhoGrid();
  for (auto rho = grid.rbegin(); rho != grid.rend(); ++rho) {
    for (std::size_t S = base.N; S >= 1; --S) {
      DpParams p = base;
      p.rho = *rho;
      p.S = S;
      if (p.scheme == SchemeKind::kFull) p.scheme = SchemeKind::kSchemeII;
      if (p.eta > EtaMaxDp(p)) continue;
      const DpReport r = Account(p);
      if (r.total.epsilon <= eps_star && r.total.delta <= delta_star && !r.total.clamped) {
        return BudgetChoice{p.rho, S, r.total};
      }
    }
  }
  return std::nullopt;
}

}  // namespace fald
