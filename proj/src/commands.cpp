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

#include "fald/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "fald/csv.hpp"
#include "fald/error.hpp"
#include "fald/metrics.hpp"

namespace fald {

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) Fail(ErrorCode::kIo, fmt::format("write to '{}' failed", path.string()));
}

std::filesystem::path OutputDir(const ExperimentConfig& config) {
  std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  return dir;
}

std::unique_ptr<EnergyModel> ModelFromFile(const ExperimentConfig& config) {
  std::ifstream in(config.data_file, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, fmt::format("cannot open data file '{}'", config.data_file));
  FederatedDataset data = ReadDatasetCsv(in);
  if (data.n_clients() != config.n_clients) {
    Fail(ErrorCode::kConfig, fmt::format("data file has {} clients but n_clients = {}",
                                         data.n_clients(), config.n_clients));
  }
  if (config.model == "gaussian") {
    return std::make_unique<GaussianModel>(std::move(data), config.sigma, config.tau);
  }
  // Without a separate test file the training points double as the test set.
  std::vector<DataPoint> test;
  for (std::size_t c = 0; c < data.n_clients(); ++c)
    for (const DataPoint& p : data.client(c)) test.push_back(p);
  return std::make_unique<LogisticModel>(std::move(data), config.classes, config.ridge,
                                         config.tau, std::move(test));
}

std::string Kv(std::string_view key, double v) { return fmt::format("{}={}\n", key, FormatDouble(v)); }

template <typename T>
std::string Kv(std::string_view key, const T& v) {
  return fmt::format("{}={}\n", key, v);
}

}  // namespace

std::unique_ptr<EnergyModel> BuildModel(const ExperimentConfig& config, double alpha) {
  if (!config.data_file.empty()) return ModelFromFile(config);
  if (config.model == "gaussian") {
    return GenerateGaussianFederation(config.n_clients, alpha, config.points_per_client,
                                      config.sigma, config.tau, config.effective_data_seed(),
                                      config.client_sizes);
  }
  if (!config.client_sizes.empty()) {
    Fail(ErrorCode::kConfig, "client_sizes is only supported for the gaussian model");
  }
  LogisticDataOptions o;
  o.n_clients = config.n_clients;
  o.points_per_client = config.points_per_client;
  o.features = config.features;
  o.classes = config.classes;
  o.alpha = alpha;
  o.test_points = config.test_points;
  o.ridge = config.ridge;
  o.tau = config.tau;
  o.seed = config.effective_data_seed();
  return GenerateLogisticFederation(o);
}

EnergyConstants ConstantsForZeroInit(const EnergyModel& model, double q, std::uint64_t seed) {
  ConstantsOptions opts;
  opts.subsample_ratio = q;
  opts.seed = seed;
  EnergyConstants k = model.Constants(0.0, opts);
  k.D = Norm2(k.theta_star) / std::sqrt(static_cast<double>(model.dim()));
  return k;
}

BoundInputs BoundInputsFor(const ExperimentConfig& config, const EnergyModel& model,
                           const EnergyConstants& constants) {
  BoundInputs in = InputsFromConstants(constants, model.dim(), model.data().min_weight());
  in.tau = config.tau;
  in.K = config.k_local;
  in.rho = config.rho;
  in.N = model.n_clients();
  in.scheme = config.scheme.kind;
  in.S = config.scheme.partial() ? config.scheme.S : in.N;
  in.eta = config.eta;
  return in;
}

DpParams DpParamsFor(const ExperimentConfig& config, const EnergyModel& model) {
  DpParams p;
  p.delta_l = config.delta_l;
  p.q = config.q;
  p.eta = config.eta;
  p.tau = config.tau;
  p.rho = config.rho;
  p.min_pc = model.data().min_weight();
  p.K = config.k_local;
  p.T = config.horizon;
  p.N = model.n_clients();
  p.scheme = config.scheme.kind;
  p.S = config.scheme.partial() ? config.scheme.S : p.N;
  p.delta0 = config.delta0;
  p.delta1 = config.delta1;
  p.delta2 = config.delta2;
  return p;
}

std::vector<SweepPoint> ExpandSweep(const ExperimentConfig& config, const EnergyModel& base,
                                    const EnergyConstants& constants) {
  RunConfig run;
  run.local_steps = config.k_local;
  run.tau = config.tau;
  run.rho = config.rho;
  run.schedule = config.schedule == Schedule::Kind::kFixed
                     ? Schedule::Fixed(config.eta)
                     : Schedule::Decaying(constants.L, constants.m);
  run.scheme = config.scheme;
  run.subsample_ratio = config.q;
  run.horizon = config.horizon;
  run.seed = config.seed;

  std::vector<SweepPoint> points;
  if (config.sweep == SweepAxis::kNone) {
    points.push_back({"base", config.alpha, run});
    return points;
  }
  for (const std::string& v : config.sweep_values) {
    SweepPoint p{v, config.alpha, run};
    switch (config.sweep) {
      case SweepAxis::kK: {
        const auto K = static_cast<std::size_t>(ParseInteger(v));
        p.run.local_steps = K;
        double stretch = 1.0;
        if (config.eta_rule == EtaRule::kBiasMatched) {
          const double k0 = static_cast<double>(config.k_local) - 1.0;
          const double k1 = static_cast<double>(K) - 1.0;
          const double ratio = (k0 * k0 + constants.kappa) / (k1 * k1 + constants.kappa);
          if (p.run.schedule.kind == Schedule::Kind::kFixed) p.run.schedule.eta = config.eta * ratio;
          stretch = 1.0 / ratio;
        }
        const double iters = std::ceil(static_cast<double>(config.horizon) * stretch);
        p.run.horizon = static_cast<std::uint64_t>(std::ceil(iters / static_cast<double>(K))) * K;
        break;
      }
      case SweepAxis::kAlpha: p.alpha = ParseDouble(v); break;
      case SweepAxis::kRho: p.run.rho = ParseDouble(v); break;
      case SweepAxis::kEta:
        if (config.schedule != Schedule::Kind::kFixed) {
          Fail(ErrorCode::kConfig, "sweep=eta needs schedule=fixed");
        }
        p.run.schedule.eta = ParseDouble(v);
        break;
      case SweepAxis::kScheme: p.run.scheme = ParseScheme(v); break;
      case SweepAxis::kNone: break;
    }
    ValidateRunConfig(p.run, base);
    points.push_back(std::move(p));
  }
  return points;
}

namespace {

void EvaluateGaussian(const ExperimentConfig& config, const EnergyModel& model,
                      const ReplicatedRun& run, const std::string& label,
                      std::vector<CurveRow>& rows, SummaryRow& summary) {
  const GaussianSummary target = TargetPosterior(model);
  std::vector<double> w2(run.rounds);
  for (std::size_t r = 0; r < run.rounds; ++r) {
    const GaussianSummary s = EmpiricalSummary(run.Round(r), run.replications, run.dim);
    const W2Breakdown b = W2GaussianBreakdown(s, target);
    w2[r] = b.total;
    rows.push_back({label, r, "w2", b.total});
    rows.push_back({label, r, "w2_mean", b.mean});
    rows.push_back({label, r, "w2_cov", b.cov});
  }
  summary.plateau = PlateauMean(w2);
  summary.final_value = w2.back();
  if (config.target_eps) summary.t_eps = FirstCrossing(w2, *config.target_eps);
}

void EvaluateLogistic(const ExperimentConfig& config, const LogisticModel& model,
                      const ReplicatedRun& run, const std::string& label,
                      std::vector<CurveRow>& rows, SummaryRow& summary) {
  const auto& test = model.test_set();
  if (test.empty()) Fail(ErrorCode::kConfig, "logistic model has no test points");
  std::vector<int> labels;
  for (const DataPoint& p : test) labels.push_back(p.label);
  std::vector<std::size_t> collect;
  for (std::size_t r = 1; r < run.rounds; ++r) {
    if (r >= config.warmup_rounds && r % config.collect_every == 0) collect.push_back(r);
  }
  if (collect.empty()) {
    Fail(ErrorCode::kConfig, "no rounds to collect: horizon too short for warmup_rounds/collect_every");
  }
  std::vector<ClassificationScores> sums(collect.size());
  const std::size_t C = model.n_classes();
  Matrix probs(test.size(), C);
  for (std::size_t rep = 0; rep < run.replications; ++rep) {
    PredictiveAverager avg;
    for (std::size_t i = 0; i < collect.size(); ++i) {
      const auto theta = run.at(rep, collect[i]);
      for (std::size_t t = 0; t < test.size(); ++t) {
        const Vector p = model.PredictProba(theta, test[t].x);
        for (std::size_t k = 0; k < C; ++k) probs(t, k) = p[k];
      }
      avg.Add(probs);
      const auto records = avg.Records(labels);
      const ClassificationScores s = ClassificationMetrics(records, config.ece_bins);
      sums[i].accuracy += s.accuracy;
      sums[i].brier += s.brier;
      sums[i].ece += s.ece;
    }
  }
  const double R = static_cast<double>(run.replications);
  std::vector<double> acc(collect.size());
  for (std::size_t i = 0; i < collect.size(); ++i) {
    acc[i] = sums[i].accuracy / R;
    rows.push_back({label, collect[i], "accuracy", acc[i]});
    rows.push_back({label, collect[i], "brier", sums[i].brier / R});
    rows.push_back({label, collect[i], "ece", sums[i].ece / R});
  }
  summary.plateau = PlateauMean(acc);
  summary.final_value = acc.back();
}

}  // namespace

SweepOutcome RunExperiment(const ExperimentConfig& config, bool sweep, std::ostream& log) {
  ExperimentConfig effective = config;
  if (!sweep) {
    effective.sweep = SweepAxis::kNone;
    effective.sweep_values.clear();
  }
  const auto base = BuildModel(effective, effective.alpha);
  const EnergyConstants constants = ConstantsForZeroInit(*base, effective.q, effective.seed);
  const auto points = ExpandSweep(effective, *base, constants);

  SweepOutcome out;
  for (const SweepPoint& point : points) {
    std::unique_ptr<EnergyModel> owned;
    const EnergyModel* model = base.get();
    RunConfig run = point.run;
    if (effective.sweep == SweepAxis::kAlpha) {
      owned = BuildModel(effective, point.alpha);
      model = owned.get();
      if (run.schedule.kind == Schedule::Kind::kDecaying) {
        const EnergyConstants k = ConstantsForZeroInit(*model, effective.q, effective.seed);
        run.schedule = Schedule::Decaying(k.L, k.m);
      }
      ValidateRunConfig(run, *model);
    }
    SummaryRow summary;
    summary.sweep_value = point.label;
    summary.eta = StepSize(run.schedule, 0);
    summary.k_local = run.local_steps;
    summary.horizon = run.horizon;
    summary.rounds = static_cast<std::size_t>(run.horizon / run.local_steps);
    log << fmt::format("[{}={}] K={} eta={} T={} R={}\n", SweepAxisName(effective.sweep),
                       point.label, run.local_steps, FormatDouble(summary.eta), run.horizon,
                       effective.replications);
    try {
      ReplicatedRun result = RunReplicated(run, *model, effective.replications);
      if (const auto* logistic = dynamic_cast<const LogisticModel*>(model)) {
        EvaluateLogistic(effective, *logistic, result, point.label, out.curves, summary);
      } else {
        EvaluateGaussian(effective, *model, result, point.label, out.curves, summary);
      }
      if (effective.dump_trajectories) out.runs.push_back(std::move(result));
    } catch (const ChainAbort& e) {
      summary.truncated = true;
      summary.note = e.what();
      out.curves.push_back({point.label, static_cast<std::size_t>(e.iteration() / run.local_steps),
                            "truncated", static_cast<double>(e.iteration())});
      log << "  truncated: " << e.what() << '\n';
      if (effective.dump_trajectories) out.runs.emplace_back();
    }
    out.summary.push_back(std::move(summary));
  }
  return out;
}

std::string SummaryCsv(const std::vector<SummaryRow>& rows) {
  std::string out = "sweep_value,eta,k_local,horizon,rounds,t_eps,plateau,final,truncated\n";
  for (const SummaryRow& r : rows) {
    std::string t_eps = "nan";
    if (r.t_eps) t_eps = std::to_string(*r.t_eps);
    else if (!r.truncated && !std::isnan(r.plateau)) t_eps = "inf";
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.sweep_value, FormatDouble(r.eta),
                       r.k_local, r.horizon, r.rounds, t_eps, FormatDouble(r.plateau),
                       FormatDouble(r.final_value), r.truncated ? 1 : 0);
  }
  return out;
}

namespace {

int WriteExperiment(const ExperimentConfig& config, bool sweep, std::ostream& log) {
  const auto dir = OutputDir(config);
  const SweepOutcome outcome = RunExperiment(config, sweep, log);
  const std::string curves = CurvesCsv(outcome.curves);
  WriteFile(dir / "curves.csv", curves);
  WriteFile(dir / "summary.csv", SummaryCsv(outcome.summary));
  const bool gaussian = config.model == "gaussian";
  const std::string title =
      sweep && config.sweep != SweepAxis::kNone
          ? fmt::format("{} sweep over {}", gaussian ? "W2" : "accuracy", SweepAxisName(config.sweep))
          : std::string(gaussian ? "W2 to the target posterior" : "test accuracy");
  WriteFile(dir / "figure.svg",
            RenderSvgFromCsv(curves, gaussian ? "w2" : "accuracy", title, gaussian));
  for (std::size_t i = 0; i < outcome.runs.size(); ++i) {
    if (outcome.runs[i].replications == 0) continue;
    std::ostringstream traj;
    WriteTrajectoryCsv(outcome.runs[i], traj);
    WriteFile(dir / fmt::format("trajectories_{}.csv", i), traj.str());
  }
  for (const SummaryRow& r : outcome.summary) {
    log << fmt::format("{}: plateau={} final={}{}{}\n", r.sweep_value, FormatDouble(r.plateau),
                       FormatDouble(r.final_value),
                       r.t_eps ? fmt::format(" t_eps={} rounds", *r.t_eps) : std::string(),
                       r.truncated ? " (truncated)" : "");
  }
  return 0;
}

}  // namespace

int CmdGenData(const ExperimentConfig& config, std::ostream& log) {
  const auto dir = OutputDir(config);
  const auto model = BuildModel(config, config.alpha);
  std::ostringstream csv;
  WriteDatasetCsv(model->data(), csv);
  WriteFile(dir / "data.csv", csv.str());
  log << fmt::format("wrote {} points for {} clients to {}\n", model->data().total_points(),
                     model->n_clients(), (dir / "data.csv").string());
  return 0;
}

int CmdRun(const ExperimentConfig& config, std::ostream& log) {
  return WriteExperiment(config, false, log);
}

int CmdSweep(const ExperimentConfig& config, std::ostream& log) {
  return WriteExperiment(config, true, log);
}

int CmdBounds(const ExperimentConfig& config, std::ostream& log) {
  const auto dir = OutputDir(config);
  const auto model = BuildModel(config, config.alpha);
  const EnergyConstants k = ConstantsForZeroInit(*model, config.q, config.seed);
  const BoundInputs in = BoundInputsFor(config, *model, k);
  const bool decaying = config.schedule == Schedule::Kind::kDecaying;
  std::string csv = "k,bound\n";
  for (std::uint64_t r = 0; r <= config.horizon / config.k_local; ++r) {
    const double it = static_cast<double>(r * config.k_local);
    double b = 0.0;
    if (decaying) b = BoundDecaying(in, it);
    else if (config.scheme.partial()) b = BoundPartial(in, it);
    else b = BoundFullFixed(in, it);
    csv += fmt::format("{},{}\n", r * config.k_local, FormatDouble(b));
  }
  WriteFile(dir / "bounds.csv", csv);
  std::string consts = Kv("L", k.L) + Kv("m", k.m) + Kv("kappa", k.kappa) + Kv("D", k.D) +
                       Kv("gamma_het", k.gamma_het) + Kv("sigma_sg", k.sigma_sg) +
                       Kv("h_rho", HRho(in)) + Kv("eta_limit", EtaLimit(in)) +
                       Kv("optimal_k", OptimalLocalSteps(k.kappa));
  WriteFile(dir / "constants.txt", consts);
  log << consts;
  return 0;
}

int CmdPrivacy(const ExperimentConfig& config, std::ostream& log) {
  const auto dir = OutputDir(config);
  const auto model = BuildModel(config, config.alpha);
  const DpParams p = DpParamsFor(config, *model);
  ValidateDpParams(p);
  const double eta_max = EtaMaxDp(p);
  std::string report = Kv("eta", p.eta) + Kv("eta_max", eta_max);
  if (p.eta > eta_max) {
    report += Kv("admissible", "false");
    WriteFile(dir / "privacy_report.txt", report);
    log << fmt::format("eta = {} is not admissible: eta_max = {}\n", FormatDouble(p.eta),
                       FormatDouble(eta_max));
    return 2;
  }
  const DpReport r = Account(p);
  report += Kv("admissible", "true") + Kv("scheme", SchemeName(p.scheme)) + Kv("S", p.S) +
            Kv("N", p.N) + Kv("rounds", p.T / p.K) + Kv("epsilon1", r.epsilon1) +
            Kv("epsilon_k", r.local.epsilon) + Kv("delta_k", r.local.delta) +
            Kv("epsilon_tilde", r.amplified.epsilon) + Kv("delta_tilde", r.amplified.delta) +
            Kv("epsilon", r.total.epsilon) + Kv("delta", r.total.delta) +
            Kv("epsilon_scheme2_form", r.epsilon_scheme2_form) +
            Kv("delta_clamped", r.total.clamped ? "true" : "false");
  if (config.eps_star || config.delta_star) {
    const double eps_star = config.eps_star.value_or(INFINITY);
    const double delta_star = config.delta_star.value_or(1.0);
    const auto choice = BudgetSearch(eps_star, delta_star, p);
    report += Kv("eps_star", eps_star) + Kv("delta_star", delta_star);
    if (choice) {
      report += Kv("search_rho", choice->rho) + Kv("search_s", choice->S) +
                Kv("search_epsilon", choice->budget.epsilon) +
                Kv("search_delta", choice->budget.delta);
    } else {
      report += Kv("search", "infeasible");
    }
  }
  WriteFile(dir / "privacy_report.txt", report);
  log << report;
  if (r.total.clamped) log << "warning: delta exceeded 1 and was clamped; the budget is meaningless\n";
  return 0;
}

int CmdPlan(const ExperimentConfig& config, std::ostream& log) {
  if (!config.target_eps) Fail(ErrorCode::kConfig, "plan needs target_eps");
  const auto dir = OutputDir(config);
  const auto model = BuildModel(config, config.alpha);
  const EnergyConstants k = ConstantsForZeroInit(*model, config.q, config.seed);
  BoundInputs in = BoundInputsFor(config, *model, k);
  const StepPlan plan = PlanSteps(*config.target_eps, in);
  const std::size_t best = OptimalLocalSteps(k.kappa);
  in.K = best;
  const StepPlan best_plan = PlanSteps(*config.target_eps, in);
  const std::string text =
      Kv("kappa", k.kappa) + Kv("target_eps", *config.target_eps) + Kv("k_local", config.k_local) +
      Kv("eta", plan.eta) + Kv("iterations", plan.iterations) + Kv("rounds", plan.rounds) +
      Kv("optimal_k", best) + Kv("optimal_k_eta", best_plan.eta) +
      Kv("optimal_k_iterations", best_plan.iterations) + Kv("optimal_k_rounds", best_plan.rounds);
  WriteFile(dir / "plan.txt", text);
  log << text;
  return 0;
}

int ExitCodeFor(ErrorCode code) { return code == ErrorCode::kNumeric ? 3 : 2; }

}  // namespace fald
