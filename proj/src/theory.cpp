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

#include "fald/theory.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fald/error.hpp"

namespace fald {

BoundInputs InputsFromConstants(const EnergyConstants& k, std::size_t d, double min_pc) {
  BoundInputs in;
  in.L = k.L;
  in.m = k.m;
  in.kappa = k.kappa;
  in.D = k.D;
  in.gamma_het = k.gamma_het;
  in.sigma_sg = k.sigma_sg;
  in.d = d;
  in.min_pc = min_pc;
  return in;
}

void ValidateBoundInputs(const BoundInputs& in) {
  if (!(in.m > 0.0) || !(in.L >= in.m) || !std::isfinite(in.L)) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("bounds need 0 < m <= L, got m = {}, L = {}", in.m, in.L));
  }
  if (!(in.kappa >= 1.0)) Fail(ErrorCode::kInvalidArgument, "kappa must be >= 1");
  if (in.K < 1 || in.d < 1 || in.N < 1) {
    Fail(ErrorCode::kInvalidArgument, "bounds need K >= 1, d >= 1 and N >= 1");
  }
  if (!(in.rho >= 0.0 && in.rho <= 1.0)) Fail(ErrorCode::kInvalidArgument, "rho must lie in [0, 1]");
  if (!(in.min_pc > 0.0 && in.min_pc <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "min p_c must lie in (0, 1]");
  }
  if (!(in.tau >= 0.0) || !(in.D >= 0.0) || !(in.gamma_het >= 0.0) || !(in.sigma_sg >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "tau, D, gamma and sigma must be >= 0");
  }
}

double Temperature(double tau, double rho, double p_c) {
  if (!(p_c > 0.0 && p_c <= 1.0)) Fail(ErrorCode::kInvalidArgument, "p_c must lie in (0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) Fail(ErrorCode::kInvalidArgument, "rho must lie in [0, 1]");
  return tau * (rho * rho + (1.0 - rho * rho) / p_c);
}

double HRho(const BoundInputs& in) {
  ValidateBoundInputs(in);
  const double d = static_cast<double>(in.d);
  // T_{c,rho} is decreasing in p_c, so the max sits at the smallest weight.
  return in.D * in.D + Temperature(in.tau, in.rho, in.min_pc) / in.m +
         in.gamma_het * in.gamma_het / (in.m * in.m * d) +
         in.sigma_sg * in.sigma_sg / (in.m * in.m);
}

double EtaLimit(const BoundInputs& in) { return 1.0 / (2.0 * in.L); }

namespace {

void RequireFixedEta(const BoundInputs& in) {
  if (!(in.eta > 0.0) || in.eta > EtaLimit(in)) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("bound requires eta in (0, 1/(2L)] = (0, {}], got {}", EtaLimit(in), in.eta));
  }
}

double InitialTerm(const BoundInputs& in, double k) {
  const double d = static_cast<double>(in.d);
  return std::pow(1.0 - in.eta * in.m / 4.0, k) * std::sqrt(2.0 * d) *
         (in.D + std::sqrt(in.tau / in.m));
}

double Sq(double x) { return x * x; }

}  // namespace

double BoundFullFixedAsymptote(const BoundInputs& in) {
  RequireFixedEta(in);
  const double d = static_cast<double>(in.d);
  const double K = static_cast<double>(in.K);
  return 30.0 * in.kappa * std::sqrt(in.eta * in.m * d) *
         std::sqrt((Sq(K - 1.0) + in.kappa) * HRho(in));
}

double BoundFullFixed(const BoundInputs& in, double k) {
  if (!(k >= 0.0)) Fail(ErrorCode::kInvalidArgument, "iteration count must be >= 0");
  const double tail = BoundFullFixedAsymptote(in);
  return InitialTerm(in, k) + tail;
}

double BoundDecaying(const BoundInputs& in, double k) {
  if (!(k >= 0.0)) Fail(ErrorCode::kInvalidArgument, "iteration count must be >= 0");
  BoundInputs h0 = in;
  h0.rho = 0.0;
  const double d = static_cast<double>(in.d);
  const double K = static_cast<double>(in.K);
  const double eta_k = 1.0 / (2.0 * in.L + in.m * k / 12.0);
  return 45.0 * in.kappa * std::sqrt((Sq(K - 1.0) + in.kappa) * HRho(h0)) *
         std::sqrt(eta_k * in.m * d);
}

double CK(double x) {
  if (!(x >= 0.0)) Fail(ErrorCode::kInvalidArgument, "C_K needs eta m K >= 0");
  if (x == 0.0) return 2.0;
  return x / -std::expm1(-x / 2.0);
}

double CS(SchemeKind scheme, std::size_t N, std::size_t S) {
  if (S < 1 || S > N) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("S = {} must lie in [1, N = {}]", S, N));
  }
  switch (scheme) {
    case SchemeKind::kSchemeI: return 1.0;
    case SchemeKind::kSchemeII:
      return N == 1 ? 0.0 : static_cast<double>(N - S) / static_cast<double>(N - 1);
    case SchemeKind::kFull: return 0.0;
  }
  return 0.0;
}

double BoundPartial(const BoundInputs& in, double k) {
  if (!(k >= 0.0)) Fail(ErrorCode::kInvalidArgument, "iteration count must be >= 0");
  RequireFixedEta(in);
  if (in.scheme == SchemeKind::kFull) {
    Fail(ErrorCode::kInvalidArgument, "partial-device bound needs scheme I or scheme II");
  }
  const double cs = CS(in.scheme, in.N, in.S);
  const double d = static_cast<double>(in.d);
  const double K = static_cast<double>(in.K);
  const double N = static_cast<double>(in.N);
  const double S = static_cast<double>(in.S);
  const double middle =
      30.0 * in.kappa * std::sqrt(in.eta * in.m * d) * std::sqrt(HRho(in) * (K * K + in.kappa));
  const double ck = CK(in.eta * in.m * K);
  const double partial = 2.0 * std::sqrt(ck * d * in.tau / (S * in.m) *
                                         (Sq(in.rho) + N * (1.0 - Sq(in.rho))) * cs);
  return InitialTerm(in, k) + middle + partial;
}

StepPlan PlanSteps(double epsilon, const BoundInputs& in) {
  if (!(epsilon > 0.0)) Fail(ErrorCode::kInvalidArgument, "target epsilon must be > 0");
  const double d = static_cast<double>(in.d);
  const double K = static_cast<double>(in.K);
  const double H = HRho(in);
  StepPlan plan;
  const double half = epsilon / 2.0;
  const double solved =
      half * half / (900.0 * in.kappa * in.kappa * in.m * d * (K * K + in.kappa) * H);
  plan.eta = std::min(EtaLimit(in), solved);
  const double start = std::sqrt(2.0 * d) * (in.D + std::sqrt(in.tau / in.m));
  const double need = std::max(0.0, 4.0 / (plan.eta * in.m) * std::log(start / half));
  const double rounds = std::ceil(need / K);
  if (!std::isfinite(rounds) || rounds > 9.0e18 / K) {
    Fail(ErrorCode::kNumeric, "planned horizon overflows");
  }
  plan.rounds = static_cast<std::uint64_t>(rounds);
  plan.iterations = plan.rounds * in.K;
  return plan;
}

std::size_t OptimalLocalSteps(double kappa) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    Fail(ErrorCode::kInvalidArgument, "kappa must be finite and >= 1");
  }
  // K + kappa / K is convex in K with its real minimum at sqrt(kappa).
  const double root = std::sqrt(kappa);
  auto lo = static_cast<std::size_t>(std::max(1.0, std::floor(root)));
  while (lo > 1 && static_cast<double>(lo) * static_cast<double>(lo) > kappa) --lo;
  while (static_cast<double>(lo + 1) * static_cast<double>(lo + 1) <= kappa) ++lo;
  const std::size_t hi = lo + 1;
  // Compare (lo^2 + kappa) / lo with (hi^2 + kappa) / hi without division.
  const long double a = static_cast<long double>(lo);
  const long double b = static_cast<long double>(hi);
  const long double k = kappa;
  return (a * a + k) * b <= (b * b + k) * a ? lo : hi;
}

}  // namespace fald
