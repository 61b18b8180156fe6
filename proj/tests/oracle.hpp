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

// Independent reference implementations used to produce and re-check the
// golden values in the tests. Everything here is evaluated in 50-digit
// binary floating point and written directly from the formulas, without
// sharing code with the library.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Dense>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real R(double x) { return Real(x); }

// ---- privacy --------------------------------------------------------------

inline Real EtaMax(Real tau, Real rho, Real q, Real min_pc, Real dl, Real delta0) {
  return tau * (1 - rho * rho) * q * q * min_pc / (dl * dl * log(Real("1.25") / delta0));
}

inline Real EpsilonOne(Real dl, Real eta, Real delta0, Real tau, Real rho, Real min_pc) {
  return 2 * dl * sqrt(eta * log(Real("1.25") / delta0) / (tau * (1 - rho * rho) * min_pc));
}

struct Budget {
  Real eps;
  Real delta;
};

inline Budget ComposeLocal(Real eps1, int K, Real q, Real delta0, Real delta1) {
  const Real k = K;
  Real factor = k;
  if (delta1 > 0) {
    const Real adv = sqrt(2 * k * log(1 / delta1)) + k * (exp(eps1) - 1);
    if (adv < factor) factor = adv;
  }
  return {eps1 * factor, k * q * delta0 + delta1};
}

inline Budget AmplifySchemeII(Real eps_k, int S, int N, int K, Real q, Real delta0, Real delta1) {
  const Real rate = Real(S) / Real(N);
  return {log(1 + rate * (exp(eps_k) - 1)), rate * (Real(K) * q * delta0 + delta1)};
}

inline Budget AmplifySchemeI(Real eps_k, int S, int N, int K, Real q, Real delta0, Real delta1) {
  const Real p = Real(1) / Real(N);
  const Real hit = 1 - pow(1 - p, S);
  Budget out{log(1 + hit * (exp(eps_k) - 1)), 0};
  for (int s = 1; s <= S; ++s) {
    const Real choose = boost::math::binomial_coefficient<Real>(S, s);
    const Real w = choose * pow(p, s) * pow(1 - p, S - s);
    const Real base =
        Real("1.25") * Real(K) * q * pow(delta0 / Real("1.25"), Real(1) / Real(s * s)) + delta1;
    out.delta += w * (exp(eps_k) - 1) * base / (exp(eps_k / s) - 1);
  }
  return out;
}

inline Budget ComposeRounds(Real eps_t, Real delta_t, std::uint64_t rounds, Real delta2) {
  const Real e = Real(rounds);
  Real eps = e * eps_t;
  if (delta2 > 0) {
    const Real adv = sqrt(2 * e * log(1 / delta2)) * eps_t + e * eps_t * (exp(eps_t) - 1);
    if (adv < eps) eps = adv;
  }
  return {eps, e * delta_t + delta2};
}

// ---- theory ---------------------------------------------------------------

struct Inputs {
  Real L, m, kappa, D, gamma, sigma, tau;
  int d, K;
  Real rho;
  int N, S;
  Real eta, min_pc;
};

inline Real HRho(const Inputs& in) {
  const Real T = in.tau * (in.rho * in.rho + (1 - in.rho * in.rho) / in.min_pc);
  return in.D * in.D + T / in.m + in.gamma * in.gamma / (in.m * in.m * in.d) +
         in.sigma * in.sigma / (in.m * in.m);
}

inline Real FirstTerm(const Inputs& in, Real k) {
  return pow(1 - in.eta * in.m / 4, k) * sqrt(Real(2 * in.d)) * (in.D + sqrt(in.tau / in.m));
}

inline Real BoundFullFixed(const Inputs& in, Real k) {
  const Real km1 = Real(in.K - 1);
  return FirstTerm(in, k) +
         30 * in.kappa * sqrt(in.eta * in.m * in.d) * sqrt((km1 * km1 + in.kappa) * HRho(in));
}

inline Real BoundDecaying(const Inputs& in, Real k) {
  Inputs h0 = in;
  h0.rho = 0;
  const Real km1 = Real(in.K - 1);
  const Real eta_k = 1 / (2 * in.L + in.m * k / 12);
  return 45 * in.kappa * sqrt((km1 * km1 + in.kappa) * HRho(h0)) * sqrt(eta_k * in.m * in.d);
}

inline Real CK(Real x) { return x / (1 - exp(-x / 2)); }

inline Real BoundPartial(const Inputs& in, Real k, bool scheme_two) {
  const Real K = Real(in.K);
  const Real cs = scheme_two ? Real(in.N - in.S) / Real(in.N - 1) : Real(1);
  const Real middle = 30 * in.kappa * sqrt(in.eta * in.m * in.d) * sqrt(HRho(in) * (K * K + in.kappa));
  const Real part = 2 * sqrt(CK(in.eta * in.m * K) * in.d * in.tau / (Real(in.S) * in.m) *
                             (in.rho * in.rho + Real(in.N) * (1 - in.rho * in.rho)) * cs);
  return FirstTerm(in, k) + middle + part;
}

struct Plan {
  Real eta;
  std::uint64_t iterations;
};

inline Plan PlanSteps(Real eps, const Inputs& in) {
  const Real K = Real(in.K);
  const Real half = eps / 2;
  Real eta = half * half / (900 * in.kappa * in.kappa * in.m * in.d * (K * K + in.kappa) * HRho(in));
  const Real limit = 1 / (2 * in.L);
  if (limit < eta) eta = limit;
  const Real start = sqrt(Real(2 * in.d)) * (in.D + sqrt(in.tau / in.m));
  // Smallest multiple of K with exp(-eta m T / 4) start <= eps / 2, by direct search
  // upward from the closed-form estimate's neighbourhood.
  Real need = 4 / (eta * in.m) * log(start / half);
  if (need < 0) need = 0;
  std::uint64_t rounds = static_cast<std::uint64_t>(floor(need / K)) ;
  if (rounds > 0) --rounds;
  while (exp(-eta * in.m * Real(rounds * in.K) / 4) * start > half) ++rounds;
  return {eta, rounds * static_cast<std::uint64_t>(in.K)};
}

// ---- metrics --------------------------------------------------------------

// W2 between Gaussians through the Cholesky factor of b: the nonzero spectrum
// of (B^1/2 A B^1/2) equals that of L^T A L when B = L L^T.
inline double W2Cholesky(const Eigen::VectorXd& ma, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& mb, const Eigen::MatrixXd& b) {
  const Eigen::LLT<Eigen::MatrixXd> llt(b);
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd inner = L.transpose() * a * L;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (inner + inner.transpose()));
  double cross = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) cross += std::sqrt(std::max(0.0, eig.eigenvalues()(i)));
  const double w2 = (ma - mb).squaredNorm() + std::max(0.0, a.trace() + b.trace() - 2.0 * cross);
  return std::sqrt(w2);
}

}  // namespace oracle
