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

// Hand-rolled generators for the property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fald/linalg.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double Uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double Normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t Index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  fald::Vector Vec(std::size_t d, double scale = 1.0) {
    fald::Vector v(d);
    for (double& x : v) x = scale * Normal();
    return v;
  }

  // Random orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
  fald::Matrix Rotation(std::size_t d) {
    fald::Matrix q(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      fald::Vector v = Vec(d);
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += v[i] * q(i, k);
        for (std::size_t i = 0; i < d; ++i) v[i] -= dot * q(i, k);
      }
      const double n = fald::Norm2(v);
      for (std::size_t i = 0; i < d; ++i) q(i, j) = v[i] / n;
    }
    return q;
  }

  // Q diag(lambda) Q^T with eigenvalues drawn log-uniformly from [lo, hi].
  fald::Matrix Spd(std::size_t d, double lo = 0.1, double hi = 10.0) {
    const fald::Matrix q = Rotation(d);
    fald::Vector lam(d);
    for (double& l : lam) l = std::exp(Uniform(std::log(lo), std::log(hi)));
    fald::Matrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) out(i, j) += q(i, k) * lam[k] * q(j, k);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
