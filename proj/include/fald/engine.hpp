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

// FA-LD chains: K local Langevin steps per client with rho-correlated noise,
// then full or partial averaging broadcast back to every client.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fald/error.hpp"
#include "fald/linalg.hpp"
#include "fald/model.hpp"
#include "fald/rng.hpp"

namespace fald {

struct Schedule {
  enum class Kind { kFixed, kDecaying };
  Kind kind = Kind::kFixed;
  double eta = 0.0;  // kFixed
  double L = 0.0;    // kDecaying
  double m = 0.0;

  static Schedule Fixed(double eta) { return {Kind::kFixed, eta, 0.0, 0.0}; }
  static Schedule Decaying(double L, double m) { return {Kind::kDecaying, 0.0, L, m}; }
};

// Fixed: eta. Decaying: 1 / (2L + m k / 12).
double StepSize(const Schedule& schedule, std::uint64_t k);

enum class SchemeKind { kFull, kSchemeI, kSchemeII };

struct Scheme {
  SchemeKind kind = SchemeKind::kFull;
  std::size_t S = 0;

  static Scheme Full() { return {SchemeKind::kFull, 0}; }
  static Scheme SchemeI(std::size_t s) { return {SchemeKind::kSchemeI, s}; }
  static Scheme SchemeII(std::size_t s) { return {SchemeKind::kSchemeII, s}; }
  bool partial() const { return kind != SchemeKind::kFull; }
};

const char* SchemeName(SchemeKind kind);

struct RunConfig {
  std::size_t local_steps = 1;
  double tau = 1.0;
  double rho = 0.0;
  Schedule schedule = Schedule::Fixed(1e-4);
  Scheme scheme;
  double subsample_ratio = 1.0;
  std::uint64_t horizon = 0;  // total iterations T
  std::uint64_t seed = 0;
  // Per-client initial states; empty means all zeros.
  std::vector<Vector> init;
};

// Throws kInvalidArgument naming the violated constraint.
void ValidateRunConfig(const RunConfig& config, const EnergyModel& model);

// Raised when a chain produces NaN or leaves the divergence radius.
class ChainAbort : public Error {
 public:
  ChainAbort(const std::string& what, std::uint64_t replication,
             std::uint64_t iteration, std::size_t client)
      : Error(ErrorCode::kNumeric, what),
        replication_(replication),
        iteration_(iteration),
        client_(client) {}

  std::uint64_t replication() const { return replication_; }
  std::uint64_t iteration() const { return iteration_; }
  std::size_t client() const { return client_; }

 private:
  std::uint64_t replication_;
  std::uint64_t iteration_;
  std::size_t client_;
};

inline constexpr double kDivergenceRadius = 1e12;

// sqrt(2 eta tau rho^2) * shared + sqrt(2 eta tau (1 - rho^2) / p_c) * own,
// written into out.
void InjectedNoise(std::span<const double> shared, std::span<const double> own,
                   double eta, double tau, double rho, double p_c,
                   std::span<double> out);

// theta - eta * grad + noise.
Vector LocalStep(std::span<const double> theta, std::span<const double> grad,
                 std::span<const double> noise, double eta);

// Scheme I: S categorical draws by weight. Scheme II: uniform S-subset.
// The result is sorted so aggregation order does not depend on the draw order.
std::vector<std::size_t> SampleDevices(const Scheme& scheme, std::span<const double> weights,
                                       Stream& stream);

// Full: sum_c p_c beta^c. Partial: (1 / S) sum over the sampled devices.
Vector Synchronize(std::span<const Vector> betas, const Scheme& scheme,
                   std::span<const double> weights, std::span<const std::size_t> devices);

struct Trajectory {
  std::vector<std::uint64_t> iteration;  // k at which round r was recorded
  std::vector<double> eta;               // step size of the last local step
  std::vector<Vector> theta;             // synchronized global state

  std::size_t rounds() const { return theta.size(); }
};

// Runs T iterations for one replication. Round 0 is the (averaged) initial
// state; round r is recorded right after the r-th synchronization.
Trajectory RunChain(const RunConfig& config, const EnergyModel& model,
                    std::uint64_t replication);

// Samples from R chains, laid out as [replication][round][coordinate].
struct ReplicatedRun {
  std::size_t replications = 0;
  std::size_t rounds = 0;
  std::size_t dim = 0;
  std::vector<std::uint64_t> iteration;
  std::vector<double> eta;
  std::vector<double> samples;

  std::span<const double> at(std::size_t rep, std::size_t round) const {
    return {samples.data() + (rep * rounds + round) * dim, dim};
  }
  // R x d block of all replications at one round.
  std::vector<double> Round(std::size_t round) const;
};

// Reads FALD_THREADS (0 or unset = hardware concurrency).
std::size_t ThreadCountFromEnv();

// Runs replications 0..R-1 on up to `threads` workers (0 = ThreadCountFromEnv()).
// Output does not depend on the thread count.
ReplicatedRun RunReplicated(const RunConfig& config, const EnergyModel& model,
                            std::size_t replications, std::size_t threads = 0);

// Columns replication,round,iteration,theta_1..theta_d.
void WriteTrajectoryCsv(const ReplicatedRun& run, std::ostream& out);

}  // namespace fald
