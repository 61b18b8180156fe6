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

// Acceptance runner: one PASS/FAIL line per criterion. Exit status is 0 only
// when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "fald/commands.hpp"
#include "fald/engine.hpp"
#include "fald/metrics.hpp"
#include "fald/privacy.hpp"
#include "fald/theory.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace fald;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string cli;
  std::string config_dir;
  std::string work_dir;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

void Print(const std::string& id, const Verdict& v) {
  std::cout << fmt::format("criterion {}: {} | {}", id, v.pass ? "PASS" : "FAIL", v.detail)
            << std::endl;
}

// The Gaussian federation shared by the convergence criteria.
std::string Desk(const std::string& eta, const std::string& extra = "") {
  return "n_clients = 10\npoints_per_client = 20\nalpha = 1\nsigma = 5,-2;-2,1\ntau = 1\n"
         "k_local = 10\nhorizon = 20000\nseed = 1\nreplications = 200\neta = " +
         eta + "\n" + extra;
}

SweepOutcome Run(const std::string& text, bool sweep) {
  std::ostringstream log;
  return RunExperiment(ParseConfig(text), sweep, log);
}

std::vector<double> Curve(const SweepOutcome& out, const std::string& label,
                          const std::string& metric = "w2") {
  std::vector<double> v;
  for (const CurveRow& r : out.curves)
    if (r.sweep_value == label && r.metric == metric) v.push_back(r.value);
  return v;
}

double Plateau(const SweepOutcome& out, const std::string& label) {
  for (const SummaryRow& r : out.summary)
    if (r.sweep_value == label) return r.plateau;
  return NAN;
}

double Mean(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i];
  return s / static_cast<double>(hi - lo);
}

Verdict Criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const SweepOutcome out = Run(Desk("1e-4"), false);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto w2 = Curve(out, "base");
  const std::size_t n = w2.size();
  const double plateau = Plateau(out, "base");
  const double third = Mean(w2, n / 2, 3 * n / 4), fourth = Mean(w2, 3 * n / 4, n);
  const bool decreased = w2.front() > 5 * plateau;
  const bool flat = std::abs(third - fourth) <= 0.2 * plateau;
  return {decreased && flat && secs < 60.0,
          fmt::format("rounds={} w2[0]={:.4g} plateau={:.4g} q3={:.4g} q4={:.4g} runtime={:.1f}s",
                      n - 1, w2.front(), plateau, third, fourth, secs)};
}

Verdict Criterion2() {
  const SweepOutcome out = Run(Desk("1e-4", "sweep = eta\nsweep_values = 1e-4,2.5e-5\n"), true);
  const double a = Plateau(out, "1e-4"), b = Plateau(out, "2.5e-5");
  const double ratio = a / b;
  return {ratio >= 1.6 && ratio <= 2.6,
          fmt::format("plateau(eta)={:.4g} plateau(eta/4)={:.4g} ratio={:.3f} (want [1.6, 2.6])",
                      a, b, ratio)};
}

Verdict Criterion3() {
  const SweepOutcome out =
      Run(Desk("1e-4", "sweep = eta\nsweep_values = 1e-4,2e-4,4e-4\n"), true);
  const double a = Plateau(out, "1e-4"), b = Plateau(out, "2e-4"), c = Plateau(out, "4e-4");
  return {a < b && b < c, fmt::format("plateau 1e-4={:.4g} 2e-4={:.4g} 4e-4={:.4g}", a, b, c)};
}

Verdict Criterion4() {
  const std::string sweep = "sweep = scheme\nsweep_values = full,scheme1:5,scheme2:5\n";
  const SweepOutcome hi = Run(Desk("2e-4", sweep), true);
  const SweepOutcome lo = Run(Desk("1e-4", sweep), true);
  bool ok = true;
  std::string detail;
  for (const std::string scheme : {"scheme1:5", "scheme2:5"}) {
    const double ph = Plateau(hi, scheme), pl = Plateau(lo, scheme);
    const double fh = Plateau(hi, "full"), fl = Plateau(lo, "full");
    const double change = std::abs(ph - pl) / ph;
    ok = ok && ph >= 2 * fh && pl >= 2 * fl && change < 0.25;
    detail += fmt::format("{}: plateau 2e-4={:.4g} (full {:.4g}) 1e-4={:.4g} (full {:.4g}) "
                          "change={:.1f}%; ",
                          scheme, ph, fh, pl, fl, 100 * change);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Verdict Criterion5() {
  const std::string text =
      "n_clients = 10\npoints_per_client = 20\nalpha = 1\nk_local = 1\neta = 4e-4\n"
      "horizon = 400\nseed = 3\nreplications = 100\ntarget_eps = 0.05\nsweep = K\n"
      "sweep_values = 1,5,10,25,50,100\neta_rule = bias_matched\n";
  const SweepOutcome out = Run(text, true);
  std::vector<double> rounds;
  std::string detail = "rounds to eps:";
  for (const SummaryRow& r : out.summary) {
    const double v = r.t_eps ? static_cast<double>(*r.t_eps) : INFINITY;
    rounds.push_back(v);
    detail += fmt::format(" K={}:{}", r.sweep_value, v);
  }
  const auto best = std::min_element(rounds.begin(), rounds.end()) - rounds.begin();
  const bool interior = best > 0 && best + 1 < static_cast<std::ptrdiff_t>(rounds.size());
  const double saving = rounds.front() / rounds[static_cast<std::size_t>(best)];
  detail += fmt::format("; best K={} saving={:.2f}x", out.summary[static_cast<std::size_t>(best)].sweep_value,
                        saving);
  return {interior && saving >= 3.0, detail};
}

Verdict Criterion6() {
  const auto model = GenerateGaussianFederation(10, 1.0, 20, Matrix{{5, -2}, {-2, 1}}, 1.0, 1);
  RunConfig cfg;
  cfg.local_steps = 10;
  cfg.rho = 0.5;
  cfg.schedule = Schedule::Fixed(1e-4);
  cfg.horizon = 2000;
  cfg.seed = 17;
  std::ostringstream full, two;
  WriteTrajectoryCsv(RunReplicated(cfg, *model, 8), full);
  cfg.scheme = Scheme::SchemeII(10);
  WriteTrajectoryCsv(RunReplicated(cfg, *model, 8), two);
  return {full.str() == two.str(),
          fmt::format("{} bytes each, identical={}", full.str().size(), full.str() == two.str())};
}

Verdict Criterion7() {
  const Vector w{0.05, 0.05, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.15, 0.15};
  const double eta = 1e-4, tau = 1.0;
  const std::size_t d = 2, draws = 100000;
  bool ok = true;
  std::string detail;
  for (double rho : {0.0, 0.5, 1.0}) {
    std::vector<double> sum(d, 0.0), sum2(d, 0.0);
    Vector shared(d), own(d), noise(d);
    for (std::size_t i = 0; i < draws; ++i) {
      Stream s = DeriveStream(7, 0, i, kSharedClient, Purpose::kNoise);
      s.FillNormal(shared);
      Vector agg(d, 0.0);
      for (std::size_t c = 0; c < w.size(); ++c) {
        Stream cs = DeriveStream(7, 0, i, static_cast<std::uint32_t>(c), Purpose::kNoise);
        cs.FillNormal(own);
        InjectedNoise(shared, own, eta, tau, rho, w[c], noise);
        for (std::size_t j = 0; j < d; ++j) agg[j] += w[c] * noise[j];
      }
      for (std::size_t j = 0; j < d; ++j) {
        const double x = agg[j] / std::sqrt(2 * eta * tau);
        sum[j] += x;
        sum2[j] += x * x;
      }
    }
    detail += fmt::format("rho={}:", rho);
    for (std::size_t j = 0; j < d; ++j) {
      const double mean = sum[j] / draws;
      const double var = sum2[j] / draws - mean * mean;
      ok = ok && var >= 0.98 && var <= 1.02;
      detail += fmt::format(" var{}={:.4f}", j + 1, var);
    }
    detail += "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Verdict Criterion8() {
  const std::string text = Desk("1e-4");
  const ExperimentConfig config = ParseConfig(text);
  const SweepOutcome out = Run(text, false);
  const auto w2 = Curve(out, "base");
  const auto model = BuildModel(config, config.alpha);
  const EnergyConstants k = ConstantsForZeroInit(*model, config.q, config.seed);
  const BoundInputs in = BoundInputsFor(config, *model, k);
  double min_gap = INFINITY;
  std::size_t violations = 0;
  for (std::size_t r = 0; r < w2.size(); ++r) {
    const double b = BoundFullFixed(in, static_cast<double>(r * config.k_local));
    min_gap = std::min(min_gap, b - w2[r]);
    if (b <= w2[r]) ++violations;
  }
  return {violations == 0,
          fmt::format("rounds={} violations={} min(bound - w2)={:.4g} bound_asymptote={:.4g}",
                      w2.size(), violations, min_gap, BoundFullFixedAsymptote(in))};
}

Verdict Criterion9() {
  gen::Gen g(909);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = g.Index(1, 5);
    const GaussianSummary a{g.Vec(d, 2.0), g.Spd(d, 0.05, 20.0)};
    const GaussianSummary b{g.Vec(d, 2.0), g.Spd(d, 0.05, 20.0)};
    Eigen::VectorXd ma(d), mb(d);
    Eigen::MatrixXd ca(d, d), cb(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      ma(r) = a.mean[r];
      mb(r) = b.mean[r];
      for (std::size_t c = 0; c < d; ++c) {
        ca(r, c) = a.cov(r, c);
        cb(r, c) = b.cov(r, c);
      }
    }
    worst = std::max(worst, std::abs(W2Gaussian(a, b) - oracle::W2Cholesky(ma, ca, mb, cb)));
  }
  return {worst < 1e-8, fmt::format("50 pairs, max |difference| = {:.3g}", worst)};
}

DpParams DpBase() {
  DpParams p;
  p.delta_l = 1.0;
  p.q = 0.5;
  p.eta = 1e-4;
  p.tau = 1.0;
  p.rho = 0.3;
  p.min_pc = 0.1;
  p.K = 10;
  p.T = 10000;
  p.S = 5;
  p.N = 10;
  p.scheme = SchemeKind::kSchemeII;
  p.delta0 = 1e-5;
  p.delta1 = 1e-6;
  p.delta2 = 1e-5;
  return p;
}

Verdict Ladder(const std::string& name, const std::function<void(DpParams&, int)>& set) {
  std::vector<double> eps;
  for (int i = 0; i < 4; ++i) {
    DpParams p = DpBase();
    set(p, i);
    eps.push_back(Account(p).total.epsilon);
  }
  bool strict = true;
  for (std::size_t i = 1; i < eps.size(); ++i) strict = strict && eps[i] > eps[i - 1];
  return {strict, fmt::format("{} ladder eps = {:.6g}, {:.6g}, {:.6g}, {:.6g}", name, eps[0], eps[1],
                              eps[2], eps[3])};
}

Verdict Criterion10() {
  std::vector<std::pair<std::string, Verdict>> parts;
  parts.push_back({"10a-eta", Ladder("eta", [](DpParams& p, int i) { p.eta = 1e-5 * (1 << i); })});
  parts.push_back({"10a-T", Ladder("T", [](DpParams& p, int i) { p.T = 2500u << i; })});
  parts.push_back({"10a-S", Ladder("S", [](DpParams& p, int i) { p.S = 2 + 2 * i; })});
  parts.push_back({"10a-q", Ladder("q", [](DpParams& p, int i) { p.q = 0.4 + 0.2 * i; })});

  DpParams full = DpBase();
  full.S = full.N;
  const DpReport r = Account(full);
  parts.push_back({"10b", {r.amplified.epsilon == r.local.epsilon,
                           fmt::format("eps_K={:.17g} amplified={:.17g}", r.local.epsilon,
                                       r.amplified.epsilon)}});

  const double et = 0.005, d2 = 1e-5;
  auto advanced = [&](std::uint64_t rounds) {
    return std::sqrt(2.0 * static_cast<double>(rounds) * std::log(1 / d2)) * et;
  };
  const double a = ComposeRounds(et, 0.0, 1000, d2).epsilon;
  const double b = ComposeRounds(et, 0.0, 2000, d2).epsilon;
  const double lead = advanced(2000) / advanced(1000);
  const double ratio = b / a;
  parts.push_back({"10c", {std::abs(ratio - std::sqrt(2.0)) <= 0.1 * std::sqrt(2.0) &&
                               std::abs(lead - std::sqrt(2.0)) < 1e-12,
                           fmt::format("eps_tilde={} eps(2T)/eps(T)={:.4f} leading term ratio={:.6f}",
                                       et, ratio, lead)}});

  DpParams one = DpBase();
  one.q = 1.0;
  one.rho = 0.0;
  const double e1 = EpsilonOne(one);
  const double golden = 0.2166662780986874109;
  const double rel = std::abs(e1 - golden) / golden;
  parts.push_back({"10d", {rel <= 1e-12, fmt::format("eps1={:.17g} golden={:.17g} rel={:.2g}", e1,
                                                     golden, rel)}});

  bool all = true;
  std::string failed;
  for (const auto& [id, v] : parts) {
    Print(id, v);
    all = all && v.pass;
    if (!v.pass) failed += " " + id;
  }
  return {all, all ? "all parts pass" : "failing parts:" + failed};
}

Verdict Criterion11() {
  std::size_t mismatches = 0;
  for (int kappa = 1; kappa <= 10000; ++kappa) {
    std::size_t best = 1;
    double best_v = INFINITY;
    for (std::size_t K = 1; K <= 1000; ++K) {
      const double v = static_cast<double>(K) + kappa / static_cast<double>(K);
      if (v < best_v) {
        best_v = v;
        best = K;
      }
    }
    if (OptimalLocalSteps(kappa) != best) ++mismatches;
  }
  return {mismatches == 0, fmt::format("kappa 1..10000, mismatches={}", mismatches)};
}

std::map<std::string, std::string> CsvFiles(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Verdict Criterion12(const Options& opt) {
  if (opt.cli.empty()) return {false, "no --cli given"};
  const fs::path work = fs::path(opt.work_dir) / "determinism";
  fs::remove_all(work);
  const fs::path cfg = fs::path(opt.config_dir) / "determinism.cfg";
  std::vector<std::map<std::string, std::string>> outputs;
  for (const char* threads : {"1", "4"}) {
    const fs::path dir = work / (std::string("threads_") + threads);
    fs::create_directories(dir);
    const std::string cmd = fmt::format("FALD_THREADS={} '{}' sweep '{}' -o '{}' > /dev/null",
                                        threads, opt.cli, cfg.string(), dir.string());
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, fmt::format("'{}' exited with {}", cmd, rc)};
    outputs.push_back(CsvFiles(dir));
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  std::size_t bytes = 0;
  for (const auto& [name, text] : outputs[0]) bytes += text.size();
  return {same, fmt::format("FALD_THREADS=1 vs 4: {} csv files, {} bytes, identical={}",
                            outputs[0].size(), bytes, same)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fald acceptance criteria"};
  Options opt;
  std::vector<int> selected;
  app.add_option("-c,--criterion", selected, "criterion numbers (default all)");
  app.add_option("--cli", opt.cli, "path to the fald executable");
  app.add_option("--config-dir", opt.config_dir, "directory holding determinism.cfg");
  opt.work_dir = fs::temp_directory_path().string();
  app.add_option("--work-dir", opt.work_dir, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 12; ++i) selected.push_back(i);

  const std::map<int, std::function<Verdict()>> criteria{
      {1, Criterion1},   {2, Criterion2},   {3, Criterion3},  {4, Criterion4},
      {5, Criterion5},   {6, Criterion6},   {7, Criterion7},  {8, Criterion8},
      {9, Criterion9},   {10, Criterion10}, {11, Criterion11},
      {12, [&] { return Criterion12(opt); }},
  };
  bool all = true;
  for (int id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    Verdict v;
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    Print(std::to_string(id), v);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
