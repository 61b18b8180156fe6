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

// Flat key=value experiment description shared by every CLI subcommand.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fald/engine.hpp"
#include "fald/linalg.hpp"

namespace fald {

enum class SweepAxis { kNone, kK, kAlpha, kRho, kEta, kScheme };
enum class EtaRule { kFixed, kBiasMatched };

struct ExperimentConfig {
  // Model and data.
  std::string model = "gaussian";  // gaussian | logistic
  std::size_t n_clients = 0;
  std::size_t points_per_client = 20;
  std::vector<std::size_t> client_sizes;
  double alpha = 1.0;
  Matrix sigma{{5.0, -2.0}, {-2.0, 1.0}};
  std::string data_file;
  std::optional<std::uint64_t> data_seed;
  std::size_t classes = 3;
  std::size_t features = 4;
  double ridge = 1.0;
  std::size_t test_points = 500;

  // Chain.
  std::size_t k_local = 1;
  double eta = 0.0;
  Schedule::Kind schedule = Schedule::Kind::kFixed;
  double tau = 1.0;
  double rho = 0.0;
  Scheme scheme;
  double q = 1.0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::size_t replications = 2;
  EtaRule eta_rule = EtaRule::kFixed;

  // Sweep and outputs.
  SweepAxis sweep = SweepAxis::kNone;
  std::vector<std::string> sweep_values;
  std::string output_dir = ".";
  std::optional<double> target_eps;
  std::size_t collect_every = 10;
  std::size_t warmup_rounds = 0;
  std::size_t ece_bins = 10;
  bool dump_trajectories = false;

  // Privacy.
  double delta_l = 1.0;
  double delta0 = 1e-5;
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::optional<double> eps_star;
  std::optional<double> delta_star;

  // Line on which each key was set, for diagnostics.
  std::map<std::string, std::size_t> lines;

  std::uint64_t effective_data_seed() const { return data_seed.value_or(seed); }
};

// Throws Error(kConfig) with the offending line number on unknown or
// duplicate keys, malformed values and violated constraints.
ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfigFile(const std::string& path);

const char* SweepAxisName(SweepAxis axis);

// "full", "scheme1:S" or "scheme2:S".
Scheme ParseScheme(std::string_view text);
std::string FormatScheme(const Scheme& scheme);

// "a,b;c,d" row-major with ';' between rows.
Matrix ParseMatrix(std::string_view text);

}  // namespace fald
