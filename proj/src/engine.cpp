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

#include "fald/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "fald/csv.hpp"

namespace fald {

double StepSize(const Schedule& schedule, std::uint64_t k) {
  if (schedule.kind == Schedule::Kind::kFixed) {
    if (!(schedule.eta > 0.0) || !std::isfinite(schedule.eta)) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("step size must be > 0, got {}", schedule.eta));
    }
    return schedule.eta;
  }
  if (!(schedule.L > 0.0) || !(schedule.m > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "decaying schedule needs L > 0 and m > 0");
  }
  return 1.0 / (2.0 * schedule.L + schedule.m * static_cast<double>(k) / 12.0);
}

const char* SchemeName(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kFull: return "full";
    case SchemeKind::kSchemeI: return "scheme1";
    case SchemeKind::kSchemeII: return "scheme2";
  }
  return "?";
}

void ValidateRunConfig(const RunConfig& config, const EnergyModel& model) {
  const std::size_t n = model.n_clients();
  if (config.local_steps < 1) Fail(ErrorCode::kInvalidArgument, "local steps K must be >= 1");
  if (!(config.tau >= 0.0) || !std::isfinite(config.tau)) {
    Fail(ErrorCode::kInvalidArgument, "tau must be finite and >= 0");
  }
  if (!(config.rho >= 0.0 && config.rho <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("rho must lie in [0, 1], got {}", config.rho));
  }
  if (!(config.subsample_ratio > 0.0 && config.subsample_ratio <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("subsample ratio q must lie in (0, 1], got {}", config.subsample_ratio));
  }
  StepSize(config.schedule, 0);
  if (config.horizon == 0 || config.horizon % config.local_steps != 0) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("horizon T = {} must be a positive multiple of K = {}", config.horizon,
                     config.local_steps));
  }
  if (config.scheme.partial()) {
    if (config.scheme.S < 1 || config.scheme.S > n) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("device count S = {} must lie in [1, N = {}]", config.scheme.S, n));
    }
    if (config.scheme.kind == SchemeKind::kSchemeII) {
      const auto& w = model.data().weights();
      for (double p : w) {
        if (std::abs(p - w.front()) > 1e-12) {
          Fail(ErrorCode::kInvalidArgument,
               "scheme II requires balanced data (equal client weights p_c)");
        }
      }
    }
  }
  if (!config.init.empty()) {
    if (config.init.size() != n) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("init has {} states for {} clients", config.init.size(), n));
    }
    for (const Vector& v : config.init) {
      if (v.size() != model.dim() || !AllFinite(v)) {
        Fail(ErrorCode::kInvalidArgument, "init states must be finite and match the model dimension");
      }
    }
  }
}

void InjectedNoise(std::span<const double> shared, std::span<const double> own,
                   double eta, double tau, double rho, double p_c,
                   std::span<double> out) {
  const double a = std::sqrt(2.0 * eta * tau * rho * rho);
  const double b = std::sqrt(2.0 * eta * tau * (1.0 - rho * rho) / p_c);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a * shared[j] + b * own[j];
}

Vector LocalStep(std::span<const double> theta, std::span<const double> grad,
                 std::span<const double> noise, double eta) {
  Vector out(theta.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = theta[j] - eta * grad[j] + noise[j];
  return out;
}

std::vector<std::size_t> SampleDevices(const Scheme& scheme, std::span<const double> weights,
                                       Stream& stream) {
  const std::size_t n = weights.size();
  if (!scheme.partial()) Fail(ErrorCode::kInvalidArgument, "device sampling needs a partial scheme");
  if (scheme.S < 1 || scheme.S > n) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("device count S = {} must lie in [1, N = {}]", scheme.S, n));
  }
  std::vector<std::size_t> out;
  out.reserve(scheme.S);
  if (scheme.kind == SchemeKind::kSchemeI) {
    for (std::size_t s = 0; s < scheme.S; ++s) {
      const double u = stream.NextUniform();
      double acc = 0.0;
      std::size_t pick = n - 1;
      for (std::size_t c = 0; c < n; ++c) {
        acc += weights[c];
        if (u < acc) {
          pick = c;
          break;
        }
      }
      // Never land on a zero-weight client through rounding at the top end.
      while (weights[pick] <= 0.0 && pick > 0) --pick;
      out.push_back(pick);
    }
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < scheme.S; ++i) {
      std::swap(all[i], all[i + stream.NextBelow(n - i)]);
      out.push_back(all[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vector Synchronize(std::span<const Vector> betas, const Scheme& scheme,
                   std::span<const double> weights, std::span<const std::size_t> devices) {
  if (betas.empty()) Fail(ErrorCode::kInvalidArgument, "nothing to synchronize");
  Vector out(betas.front().size(), 0.0);
  if (!scheme.partial()) {
    for (std::size_t c = 0; c < betas.size(); ++c)
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[c] * betas[c][j];
    return out;
  }
  if (devices.empty()) Fail(ErrorCode::kInvalidArgument, "partial synchronization needs devices");
  const double w = 1.0 / static_cast<double>(devices.size());
  for (std::size_t c : devices) {
    if (c >= betas.size()) Fail(ErrorCode::kInvalidArgument, "device index out of range");
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * betas[c][j];
  }
  return out;
}

Trajectory RunChain(const RunConfig& config, const EnergyModel& model,
                    std::uint64_t replication) {
  ValidateRunConfig(config, model);
  const std::size_t n = model.n_clients();
  const std::size_t d = model.dim();
  const std::size_t K = config.local_steps;
  const auto& weights = model.data().weights();
  const bool stochastic = config.subsample_ratio < 1.0;

  std::vector<Vector> theta = config.init.empty() ? std::vector<Vector>(n, Vector(d, 0.0))
                                                  : config.init;
  Trajectory traj;
  const std::size_t rounds = static_cast<std::size_t>(config.horizon / K);
  traj.iteration.reserve(rounds + 1);
  traj.eta.reserve(rounds + 1);
  traj.theta.reserve(rounds + 1);
  traj.iteration.push_back(0);
  traj.eta.push_back(0.0);
  traj.theta.push_back(Synchronize(theta, Scheme::Full(), weights, {}));

  Vector shared(d), own(d), grad(d), noise(d);
  for (std::uint64_t k = 0; k < config.horizon; ++k) {
    const double eta = StepSize(config.schedule, k);
    Stream shared_stream =
        DeriveStream(config.seed, replication, k, kSharedClient, Purpose::kNoise);
    shared_stream.FillNormal(shared);
    for (std::size_t c = 0; c < n; ++c) {
      const auto tag = static_cast<std::uint32_t>(c);
      if (stochastic) {
        Stream gs = DeriveStream(config.seed, replication, k, tag, Purpose::kGradient);
        model.ClientGradStochastic(c, theta[c], config.subsample_ratio, gs, grad);
      } else {
        model.ClientGrad(c, theta[c], grad);
      }
      Stream ns = DeriveStream(config.seed, replication, k, tag, Purpose::kNoise);
      ns.FillNormal(own);
      InjectedNoise(shared, own, eta, config.tau, config.rho, weights[c], noise);
      Vector& th = theta[c];
      double norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        th[j] = th[j] - eta * grad[j] + noise[j];
        norm2 += th[j] * th[j];
      }
      if (!std::isfinite(norm2)) {
        throw ChainAbort(fmt::format("replication {}: non-finite state at iteration {}, client {}",
                                     replication, k, c),
                         replication, k, c);
      }
      if (norm2 > kDivergenceRadius * kDivergenceRadius) {
        throw ChainAbort(
            fmt::format("replication {}: |theta| exceeded 1e12 at iteration {}, client {}; "
                        "reduce the step size",
                        replication, k, c),
            replication, k, c);
      }
    }
    if ((k + 1) % K == 0) {
      std::vector<std::size_t> devices;
      if (config.scheme.partial()) {
        Stream ds = DeriveStream(config.seed, replication, k, kSharedClient, Purpose::kDevices);
        devices = SampleDevices(config.scheme, weights, ds);
      }
      Vector global = Synchronize(theta, config.scheme, weights, devices);
      for (Vector& th : theta) th = global;
      traj.iteration.push_back(k + 1);
      traj.eta.push_back(eta);
      traj.theta.push_back(std::move(global));
    }
  }
  return traj;
}

std::vector<double> ReplicatedRun::Round(std::size_t round) const {
  std::vector<double> out(replications * dim);
  for (std::size_t r = 0; r < replications; ++r) {
    const auto row = at(r, round);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * dim));
  }
  return out;
}

std::size_t ThreadCountFromEnv() {
  std::size_t threads = 0;
  if (const char* env = std::getenv("FALD_THREADS"); env != nullptr && *env != '\0') {
    long long v = 0;
    try {
      v = ParseInteger(env);
    } catch (const Error&) {
      Fail(ErrorCode::kConfig, fmt::format("FALD_THREADS must be an integer, got '{}'", env));
    }
    if (v < 0) Fail(ErrorCode::kConfig, "FALD_THREADS must be >= 0");
    threads = static_cast<std::size_t>(v);
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

ReplicatedRun RunReplicated(const RunConfig& config, const EnergyModel& model,
                            std::size_t replications, std::size_t threads) {
  if (replications < 2) Fail(ErrorCode::kInvalidArgument, "need at least 2 replications");
  ValidateRunConfig(config, model);
  if (threads == 0) threads = ThreadCountFromEnv();
  threads = std::min(threads, replications);

  ReplicatedRun out;
  out.replications = replications;
  out.rounds = static_cast<std::size_t>(config.horizon / config.local_steps) + 1;
  out.dim = model.dim();
  out.samples.assign(out.replications * out.rounds * out.dim, 0.0);

  std::vector<std::exception_ptr> errors(replications);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < replications; r = next++) {
      try {
        const Trajectory t = RunChain(config, model, r);
        if (r == 0) {
          out.iteration = t.iteration;
          out.eta = t.eta;
        }
        for (std::size_t k = 0; k < t.rounds(); ++k) {
          std::copy(t.theta[k].begin(), t.theta[k].end(),
                    out.samples.begin() +
                        static_cast<std::ptrdiff_t>((r * out.rounds + k) * out.dim));
        }
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  // Report the lowest failing replication so the error is deterministic.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void WriteTrajectoryCsv(const ReplicatedRun& run, std::ostream& out) {
  out << "replication,round,iteration";
  for (std::size_t j = 0; j < run.dim; ++j) out << ",theta_" << (j + 1);
  out << '\n';
  for (std::size_t r = 0; r < run.replications; ++r) {
    for (std::size_t k = 0; k < run.rounds; ++k) {
      out << r << ',' << k << ',' << run.iteration[k];
      for (double v : run.at(r, k)) out << ',' << FormatDouble(v);
      out << '\n';
    }
  }
}

}  // namespace fald
