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

// Counter-based random streams. A stream is a pure function of
// (master seed, replication, iteration, client tag, purpose tag); nothing is
// carried between iterations, so chains can be replayed or run in any order.
//
// The block cipher is Philox4x32-10 (Salmon et al., SC'11). Normals come from
// the Box-Muller transform so every draw consumes exactly one block.

#include <array>
#include <cstdint>
#include <span>

namespace fald {

// Client tag that selects the stream shared by every client.
inline constexpr std::uint32_t kSharedClient = 0xFFFFFFFFu;

enum class Purpose : std::uint32_t {
  kNoise = 1,     // injected Langevin noise
  kGradient = 2,  // minibatch selection
  kDevices = 3,   // device sampling at synchronization
  kInit = 4,
  kData = 5,      // synthetic data generation
  kProbe = 6,     // Monte Carlo probes inside constants()
};

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock Philox4x32(PhiloxBlock counter, PhiloxKey key);

std::uint64_t SplitMix64(std::uint64_t x);

class Stream {
 public:
  Stream(PhiloxKey key, PhiloxBlock counter) : key_(key), counter_(counter) {}

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double NextUniform();
  // Uniform on (0, 1].
  double NextUniformOpenZero();
  double NextNormal();
  void FillNormal(std::span<double> out);
  // Uniform integer in [0, n). Uses 64-bit multiply-shift; bias is below 2^-32
  // for the population sizes seen here.
  std::uint64_t NextBelow(std::uint64_t n);

 private:
  void Refill();

  PhiloxKey key_;
  PhiloxBlock counter_;  // word 0 advances per block
  PhiloxBlock block_{};
  int used_words_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

Stream DeriveStream(std::uint64_t master_seed, std::uint64_t replication,
                    std::uint64_t iteration, std::uint32_t client,
                    Purpose purpose);

}  // namespace fald
