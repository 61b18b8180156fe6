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

// Subcommand implementations behind the CLI and the C API.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fald/config.hpp"
#include "fald/engine.hpp"
#include "fald/model.hpp"
#include "fald/privacy.hpp"
#include "fald/report.hpp"
#include "fald/theory.hpp"

namespace fald {

// Generated (or loaded from data_file) federation for the configured model.
std::unique_ptr<EnergyModel> BuildModel(const ExperimentConfig& config, double alpha);

// Constants with D measured from the all-zero initialization.
EnergyConstants ConstantsForZeroInit(const EnergyModel& model, double q, std::uint64_t seed);

// Bound inputs for the configured chain.
BoundInputs BoundInputsFor(const ExperimentConfig& config, const EnergyModel& model,
                           const EnergyConstants& constants);

// Privacy parameters for the configured chain.
DpParams DpParamsFor(const ExperimentConfig& config, const EnergyModel& model);

struct SweepPoint {
  std::string label;
  double alpha = 0.0;
  RunConfig run;
};

// One RunConfig per sweep value (a single "base" point when there is no axis).
// For a K sweep the horizon is rounded up to a multiple of K; with
// eta_rule=bias_matched the step is eta ((K0-1)^2 + kappa) / ((K-1)^2 + kappa)
// and the horizon is stretched by the inverse step ratio.
std::vector<SweepPoint> ExpandSweep(const ExperimentConfig& config, const EnergyModel& base,
                                    const EnergyConstants& constants);

struct SummaryRow {
  std::string sweep_value;
  double eta = 0.0;
  std::size_t k_local = 0;
  std::uint64_t horizon = 0;
  std::size_t rounds = 0;
  std::optional<std::size_t> t_eps;  // communication rounds
  double plateau = NAN;
  double final_value = NAN;
  bool truncated = false;
  std::string note;
};

struct SweepOutcome {
  std::vector<CurveRow> curves;
  std::vector<SummaryRow> summary;
  std::vector<ReplicatedRun> runs;  // kept only when dump_trajectories is set
};

// Runs every sweep point; divergent points are recorded as truncated.
// sweep=false ignores the sweep axis and runs the base point.
SweepOutcome RunExperiment(const ExperimentConfig& config, bool sweep, std::ostream& log);

std::string SummaryCsv(const std::vector<SummaryRow>& rows);

// Each returns the process exit code and writes into config.output_dir.
int CmdGenData(const ExperimentConfig& config, std::ostream& log);
int CmdRun(const ExperimentConfig& config, std::ostream& log);
int CmdSweep(const ExperimentConfig& config, std::ostream& log);
int CmdBounds(const ExperimentConfig& config, std::ostream& log);
int CmdPrivacy(const ExperimentConfig& config, std::ostream& log);
int CmdPlan(const ExperimentConfig& config, std::ostream& log);

// 2 for configuration and argument errors, 3 for numeric failures.
int ExitCodeFor(ErrorCode code);

}  // namespace fald
