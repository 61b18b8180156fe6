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

#include "fald/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "fald/csv.hpp"
#include "fald/error.hpp"

namespace fald {

namespace {

[[noreturn]] void ConfigFail(std::size_t line, const std::string& msg) {
  Fail(ErrorCode::kConfig, line == 0 ? msg : fmt::format("line {}: {}", line, msg));
}

std::size_t ParseCount(std::string_view v) {
  const long long x = ParseInteger(v);
  if (x < 0) Fail(ErrorCode::kInvalidArgument, "expected a non-negative integer");
  return static_cast<std::size_t>(x);
}

std::uint64_t ParseU64(std::string_view v) {
  v = Trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("'{}' is not an unsigned integer", v));
  }
  return out;
}

bool ParseBool(std::string_view v) {
  v = Trim(v);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  Fail(ErrorCode::kInvalidArgument, fmt::format("'{}' is not a boolean", v));
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model", [](auto& c, auto v) {
         if (v != "gaussian" && v != "logistic") {
           Fail(ErrorCode::kInvalidArgument, "model must be gaussian or logistic");
         }
         c.model = std::string(v);
       }},
      {"n_clients", [](auto& c, auto v) { c.n_clients = ParseCount(v); }},
      {"points_per_client", [](auto& c, auto v) { c.points_per_client = ParseCount(v); }},
      {"client_sizes", [](auto& c, auto v) {
         c.client_sizes.clear();
         for (const auto& f : SplitFields(v)) c.client_sizes.push_back(ParseCount(f));
       }},
      {"alpha", [](auto& c, auto v) { c.alpha = ParseDouble(v); }},
      {"sigma", [](auto& c, auto v) { c.sigma = ParseMatrix(v); }},
      {"data_file", [](auto& c, auto v) { c.data_file = std::string(v); }},
      {"data_seed", [](auto& c, auto v) { c.data_seed = ParseU64(v); }},
      {"classes", [](auto& c, auto v) { c.classes = ParseCount(v); }},
      {"features", [](auto& c, auto v) { c.features = ParseCount(v); }},
      {"ridge", [](auto& c, auto v) { c.ridge = ParseDouble(v); }},
      {"test_points", [](auto& c, auto v) { c.test_points = ParseCount(v); }},
      {"k_local", [](auto& c, auto v) { c.k_local = ParseCount(v); }},
      {"eta", [](auto& c, auto v) { c.eta = ParseDouble(v); }},
      {"schedule", [](auto& c, auto v) {
         if (v == "fixed") c.schedule = Schedule::Kind::kFixed;
         else if (v == "decaying") c.schedule = Schedule::Kind::kDecaying;
         else Fail(ErrorCode::kInvalidArgument, "schedule must be fixed or decaying");
       }},
      {"tau", [](auto& c, auto v) { c.tau = ParseDouble(v); }},
      {"rho", [](auto& c, auto v) { c.rho = ParseDouble(v); }},
      {"scheme", [](auto& c, auto v) {
         if (v == "full") c.scheme.kind = SchemeKind::kFull;
         else if (v == "scheme1") c.scheme.kind = SchemeKind::kSchemeI;
         else if (v == "scheme2") c.scheme.kind = SchemeKind::kSchemeII;
         else Fail(ErrorCode::kInvalidArgument, "scheme must be full, scheme1 or scheme2");
       }},
      {"s_devices", [](auto& c, auto v) { c.scheme.S = ParseCount(v); }},
      {"q", [](auto& c, auto v) { c.q = ParseDouble(v); }},
      {"horizon", [](auto& c, auto v) { c.horizon = ParseU64(v); }},
      {"seed", [](auto& c, auto v) { c.seed = ParseU64(v); }},
      {"replications", [](auto& c, auto v) { c.replications = ParseCount(v); }},
      {"eta_rule", [](auto& c, auto v) {
         if (v == "fixed") c.eta_rule = EtaRule::kFixed;
         else if (v == "bias_matched") c.eta_rule = EtaRule::kBiasMatched;
         else Fail(ErrorCode::kInvalidArgument, "eta_rule must be fixed or bias_matched");
       }},
      {"sweep", [](auto& c, auto v) {
         if (v == "none") c.sweep = SweepAxis::kNone;
         else if (v == "K") c.sweep = SweepAxis::kK;
         else if (v == "alpha") c.sweep = SweepAxis::kAlpha;
         else if (v == "rho") c.sweep = SweepAxis::kRho;
         else if (v == "eta") c.sweep = SweepAxis::kEta;
         else if (v == "scheme") c.sweep = SweepAxis::kScheme;
         else Fail(ErrorCode::kInvalidArgument, "sweep must be one of none, K, alpha, rho, eta, scheme");
       }},
      {"sweep_values", [](auto& c, auto v) {
         c.sweep_values.clear();
         for (const auto& f : SplitFields(v)) {
           if (f.empty()) Fail(ErrorCode::kInvalidArgument, "empty sweep value");
           c.sweep_values.push_back(f);
         }
       }},
      {"output_dir", [](auto& c, auto v) { c.output_dir = std::string(v); }},
      {"target_eps", [](auto& c, auto v) { c.target_eps = ParseDouble(v); }},
      {"collect_every", [](auto& c, auto v) { c.collect_every = ParseCount(v); }},
      {"warmup_rounds", [](auto& c, auto v) { c.warmup_rounds = ParseCount(v); }},
      {"ece_bins", [](auto& c, auto v) { c.ece_bins = ParseCount(v); }},
      {"dump_trajectories", [](auto& c, auto v) { c.dump_trajectories = ParseBool(v); }},
      {"delta_l", [](auto& c, auto v) { c.delta_l = ParseDouble(v); }},
      {"delta0", [](auto& c, auto v) { c.delta0 = ParseDouble(v); }},
      {"delta1", [](auto& c, auto v) { c.delta1 = ParseDouble(v); }},
      {"delta2", [](auto& c, auto v) { c.delta2 = ParseDouble(v); }},
      {"eps_star", [](auto& c, auto v) { c.eps_star = ParseDouble(v); }},
      {"delta_star", [](auto& c, auto v) { c.delta_star = ParseDouble(v); }},
  };
  return table;
}

void Validate(const ExperimentConfig& c) {
  auto line = [&](const char* key) {
    const auto it = c.lines.find(key);
    return it == c.lines.end() ? std::size_t{0} : it->second;
  };
  auto require = [&](bool ok, const char* key, const std::string& msg) {
    if (!ok) ConfigFail(line(key), msg);
  };
  require(c.n_clients >= 1, "n_clients", "n_clients must be >= 1");
  require(c.k_local >= 1, "k_local", "k_local must be >= 1");
  require(c.eta > 0.0 && std::isfinite(c.eta), "eta", "eta must be > 0");
  require(c.horizon >= 1 && c.horizon % c.k_local == 0, "horizon",
          fmt::format("horizon {} must be a positive multiple of k_local {}", c.horizon, c.k_local));
  require(c.tau > 0.0 && std::isfinite(c.tau), "tau", "tau must be > 0");
  require(c.rho >= 0.0 && c.rho <= 1.0, "rho", "rho must lie in [0, 1]");
  require(c.q > 0.0 && c.q <= 1.0, "q", "q must lie in (0, 1]");
  require(c.alpha >= 0.0, "alpha", "alpha must be >= 0");
  require(c.replications >= 2, "replications", "replications must be >= 2");
  require(c.points_per_client >= 1, "points_per_client", "points_per_client must be >= 1");
  require(c.collect_every >= 1, "collect_every", "collect_every must be >= 1");
  require(c.ece_bins >= 1, "ece_bins", "ece_bins must be >= 1");
  require(!c.target_eps || *c.target_eps > 0.0, "target_eps", "target_eps must be > 0");
  require(c.sigma.square() && c.sigma.rows() >= 1, "sigma", "sigma must be a square matrix");
  if (c.model == "logistic") {
    require(c.ridge > 0.0, "ridge", "ridge must be > 0");
    require(c.classes >= 2, "classes", "classes must be >= 2");
    require(c.features >= 1, "features", "features must be >= 1");
    require(c.test_points >= 1, "test_points", "test_points must be >= 1");
  }
  if (!c.client_sizes.empty()) {
    require(c.client_sizes.size() == c.n_clients, "client_sizes",
            fmt::format("client_sizes lists {} clients but n_clients = {}", c.client_sizes.size(),
                        c.n_clients));
    for (std::size_t s : c.client_sizes) require(s >= 1, "client_sizes", "client sizes must be >= 1");
  }
  if (c.scheme.partial()) {
    require(c.scheme.S >= 1 && c.scheme.S <= c.n_clients, "s_devices",
            fmt::format("s_devices must lie in [1, n_clients = {}]", c.n_clients));
  }
  const bool unbalanced =
      !c.client_sizes.empty() &&
      std::any_of(c.client_sizes.begin(), c.client_sizes.end(),
                  [&](std::size_t s) { return s != c.client_sizes.front(); });
  require(!(unbalanced && c.scheme.kind == SchemeKind::kSchemeII), "scheme",
          "scheme2 requires balanced data (all client sizes equal), but client_sizes differ");
  require(!(c.eta_rule == EtaRule::kBiasMatched && c.sweep != SweepAxis::kK), "eta_rule",
          "eta_rule=bias_matched only applies to sweep=K");

  require(c.sweep == SweepAxis::kNone || !c.sweep_values.empty(), "sweep",
          "sweep needs sweep_values");
  require(c.sweep != SweepAxis::kNone || c.sweep_values.empty(), "sweep_values",
          "sweep_values given without a sweep axis");
  for (const auto& v : c.sweep_values) {
    try {
      switch (c.sweep) {
        case SweepAxis::kK:
          if (ParseCount(v) < 1) Fail(ErrorCode::kInvalidArgument, "K must be >= 1");
          break;
        case SweepAxis::kAlpha:
          if (!(ParseDouble(v) >= 0.0)) Fail(ErrorCode::kInvalidArgument, "alpha must be >= 0");
          break;
        case SweepAxis::kRho: {
          const double r = ParseDouble(v);
          if (!(r >= 0.0 && r <= 1.0)) Fail(ErrorCode::kInvalidArgument, "rho must lie in [0, 1]");
          break;
        }
        case SweepAxis::kEta:
          if (!(ParseDouble(v) > 0.0)) Fail(ErrorCode::kInvalidArgument, "eta must be > 0");
          break;
        case SweepAxis::kScheme: {
          const Scheme s = ParseScheme(v);
          if (s.partial() && (s.S < 1 || s.S > c.n_clients)) {
            Fail(ErrorCode::kInvalidArgument, "S must lie in [1, n_clients]");
          }
          if (s.kind == SchemeKind::kSchemeII && unbalanced) {
            Fail(ErrorCode::kInvalidArgument, "scheme2 requires balanced data");
          }
          break;
        }
        case SweepAxis::kNone: break;
      }
    } catch (const Error& e) {
      ConfigFail(line("sweep_values"), fmt::format("sweep value '{}': {}", v, e.what()));
    }
  }
  if (c.delta_l <= 0.0) ConfigFail(line("delta_l"), "delta_l must be > 0");
  require(c.delta0 > 0.0 && c.delta0 < 1.0, "delta0", "delta0 must lie in (0, 1)");
  require(c.delta1 >= 0.0 && c.delta1 < 1.0, "delta1", "delta1 must lie in [0, 1)");
  require(c.delta2 >= 0.0 && c.delta2 < 1.0, "delta2", "delta2 must lie in [0, 1)");
}

}  // namespace

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig c;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) ConfigFail(line_no, fmt::format("expected key=value, got '{}'", line));
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    const auto& setters = Setters();
    const auto it = setters.find(key);
    if (it == setters.end()) ConfigFail(line_no, fmt::format("unknown key '{}'", key));
    if (c.lines.contains(key)) {
      ConfigFail(line_no, fmt::format("duplicate key '{}' (first set on line {})", key, c.lines[key]));
    }
    if (value.empty()) ConfigFail(line_no, fmt::format("key '{}' has an empty value", key));
    try {
      it->second(c, value);
    } catch (const Error& e) {
      ConfigFail(line_no, fmt::format("bad value for '{}': {}", key, e.what()));
    }
    c.lines[key] = line_no;
    if (end == text.size()) break;
  }
  for (const char* key : {"n_clients", "k_local", "eta", "horizon", "seed"}) {
    if (!c.lines.contains(key)) ConfigFail(0, fmt::format("missing mandatory key '{}'", key));
  }
  Validate(c);
  return c;
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, fmt::format("cannot open config file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseConfig(buf.str());
  } catch (const Error& e) {
    Fail(e.code(), fmt::format("{}: {}", path, e.what()));
  }
}

const char* SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kK: return "K";
    case SweepAxis::kAlpha: return "alpha";
    case SweepAxis::kRho: return "rho";
    case SweepAxis::kEta: return "eta";
    case SweepAxis::kScheme: return "scheme";
  }
  return "?";
}

Scheme ParseScheme(std::string_view text) {
  text = Trim(text);
  if (text == "full") return Scheme::Full();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view name = text.substr(0, colon);
    const std::size_t s = ParseCount(text.substr(colon + 1));
    if (name == "scheme1") return Scheme::SchemeI(s);
    if (name == "scheme2") return Scheme::SchemeII(s);
  }
  Fail(ErrorCode::kInvalidArgument,
       fmt::format("'{}' is not a scheme (full, scheme1:S or scheme2:S)", text));
}

std::string FormatScheme(const Scheme& scheme) {
  if (!scheme.partial()) return "full";
  return fmt::format("{}:{}", SchemeName(scheme.kind), scheme.S);
}

Matrix ParseMatrix(std::string_view text) {
  const auto rows = SplitFields(text, ';');
  std::vector<double> data;
  std::size_t cols = 0;
  for (const auto& row : rows) {
    const auto fields = SplitFields(row, ',');
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) Fail(ErrorCode::kInvalidArgument, "matrix rows have different lengths");
    for (const auto& f : fields) data.push_back(ParseDouble(f));
  }
  return Matrix(rows.size(), cols, std::move(data));
}

}  // namespace fald
