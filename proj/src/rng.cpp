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

#include "fald/rng.hpp"

#include <cmath>
#include <numbers>

namespace fald {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxBlock Philox4x32(PhiloxBlock ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMulA, ctr[0], hi0, lo0);
    MulHiLo(kMulB, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void Stream::Refill() {
  block_ = Philox4x32(counter_, key_);
  ++counter_[0];
  used_words_ = 0;
}

std::uint64_t Stream::NextU64() {
  if (used_words_ > 2) Refill();
  const std::uint64_t hi = block_[used_words_];
  const std::uint64_t lo = block_[used_words_ + 1];
  used_words_ += 2;
  return (hi << 32) | lo;
}

double Stream::NextUniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Stream::NextUniformOpenZero() {
  return (static_cast<double>(NextU64() >> 11) + 1.0) * 0x1.0p-53;
}

double Stream::NextNormal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = NextUniformOpenZero();
  const double u2 = NextUniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(phi);
  has_spare_normal_ = true;
  return r * std::cos(phi);
}

void Stream::FillNormal(std::span<double> out) {
  for (double& v : out) v = NextNormal();
}

std::uint64_t Stream::NextBelow(std::uint64_t n) {
  __extension__ using U128 = unsigned __int128;
  const U128 p = static_cast<U128>(NextU64()) * n;
  return static_cast<std::uint64_t>(p >> 64);
}

Stream DeriveStream(std::uint64_t master_seed, std::uint64_t replication,
                    std::uint64_t iteration, std::uint32_t client,
                    Purpose purpose) {
  const std::uint64_t k =
      SplitMix64(SplitMix64(master_seed) ^
                 SplitMix64(replication * 0x100000001B3ull +
                            static_cast<std::uint64_t>(purpose)));
  const PhiloxKey key{static_cast<std::uint32_t>(k),
                      static_cast<std::uint32_t>(k >> 32)};
  const PhiloxBlock counter{0u, client, static_cast<std::uint32_t>(iteration),
                            static_cast<std::uint32_t>(iteration >> 32)};
  return Stream(key, counter);
}

}  // namespace fald
