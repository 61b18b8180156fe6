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

// Fixed parameter sets shared by the golden-value tests and their oracles.

#include "oracle.hpp"
#include "fald/privacy.hpp"
#include "fald/theory.hpp"

namespace desk {

// Gaussian setup with sigma = [[5, -2], [-2, 1]] and n = 200 points:
// L = 200 (3 + 2 sqrt 2), m = 200 (3 - 2 sqrt 2).
inline fald::BoundInputs Inputs() {
  fald::BoundInputs in;
  in.L = 1165.6854249492380195;
  in.m = 34.314575050761980479;
  in.kappa = 33.970562748477140585;
  in.D = 1.0;
  in.gamma_het = 50.0;
  in.sigma_sg = 0.0;
  in.tau = 1.0;
  in.d = 2;
  in.K = 10;
  in.rho = 0.0;
  in.N = 10;
  in.S = 5;
  in.scheme = fald::SchemeKind::kFull;
  in.eta = 1e-4;
  in.min_pc = 0.1;
  return in;
}

inline oracle::Inputs ToOracle(const fald::BoundInputs& in) {
  using oracle::R;
  return {R(in.L), R(in.m), R(in.kappa), R(in.D), R(in.gamma_het), R(in.sigma_sg), R(in.tau),
          static_cast<int>(in.d), static_cast<int>(in.K), R(in.rho), static_cast<int>(in.N),
          static_cast<int>(in.S), R(in.eta), R(in.min_pc)};
}

// Small textbook case: d=2, D=1, tau=1, m=1, L=2, K=1, rho=0, N=2 uniform,
// gamma = sigma = 0, eta = 0.25.
inline fald::BoundInputs Small() {
  fald::BoundInputs in;
  in.L = 2.0;
  in.m = 1.0;
  in.kappa = 2.0;
  in.D = 1.0;
  in.tau = 1.0;
  in.d = 2;
  in.K = 1;
  in.N = 2;
  in.S = 2;
  in.eta = 0.25;
  in.min_pc = 0.5;
  return in;
}

inline fald::DpParams Privacy() {
  fald::DpParams p;
  p.delta_l = 1.0;
  p.q = 0.1;
  p.eta = 5e-5;
  p.tau = 1.0;
  p.rho = 0.5;
  p.min_pc = 0.1;
  p.K = 10;
  p.T = 20000;
  p.S = 5;
  p.N = 10;
  p.scheme = fald::SchemeKind::kSchemeII;
  p.delta0 = 1e-5;
  p.delta1 = 1e-6;
  p.delta2 = 1e-5;
  return p;
}

}  // namespace desk
