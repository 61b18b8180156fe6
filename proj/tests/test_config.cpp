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

#include <string>

#include "doctest.h"
#include "fald/config.hpp"
#include "fald/error.hpp"

using namespace fald;

namespace {

const std::string kMinimal =
    "n_clients = 10\n"
    "k_local = 10\n"
    "eta = 1e-4\n"
    "horizon = 2000\n"
    "seed = 1\n";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal config gets defaults") {
    const ExperimentConfig c = ParseConfig(kMinimal);
    CHECK(c.n_clients == 10);
    CHECK(c.k_local == 10);
    CHECK(c.eta == 1e-4);
    CHECK(c.rho == 0.0);
    CHECK(c.q == 1.0);
    CHECK(c.scheme.kind == SchemeKind::kFull);
    CHECK(c.model == "gaussian");
    CHECK(c.sweep == SweepAxis::kNone);
    CHECK(c.effective_data_seed() == 1);
    CHECK(c.lines.at("eta") == 3);
  }

  TEST_CASE("comments, blanks and whitespace") {
    const ExperimentConfig c = ParseConfig("# header\n\n" + kMinimal +
                                           "  rho =  0.5  # correlated\r\nscheme=scheme1\ns_devices=3");
    CHECK(c.rho == 0.5);
    CHECK(c.scheme.kind == SchemeKind::kSchemeI);
    CHECK(c.scheme.S == 3);
  }

  TEST_CASE("errors carry the line number") {
    CHECK_THROWS_WITH_AS(ParseConfig(kMinimal + "bogus = 1\n"),
                         doctest::Contains("line 6: unknown key 'bogus'"), Error);
    CHECK_THROWS_WITH_AS(ParseConfig(kMinimal + "eta = 2e-4\n"),
                         doctest::Contains("line 6: duplicate key 'eta'"), Error);
    CHECK_THROWS_WITH_AS(ParseConfig(kMinimal + "rho = abc\n"), doctest::Contains("line 6"), Error);
    CHECK_THROWS_WITH_AS(ParseConfig(kMinimal + "rho = 2\n"), doctest::Contains("line 6"), Error);
    CHECK_THROWS_WITH_AS(ParseConfig("n_clients = 3\n"), doctest::Contains("missing mandatory"),
                         Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "no equals sign\n"), Error);
    try {
      ParseConfig(kMinimal + "q = 0\n");
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfig);
    }
  }

  TEST_CASE("horizon must align with K") {
    CHECK_THROWS_WITH_AS(ParseConfig("n_clients=2\nk_local=3\neta=1e-4\nhorizon=10\nseed=0\n"),
                         doctest::Contains("line 4"), Error);
  }

  TEST_CASE("scheme II needs balanced clients") {
    const std::string base = kMinimal + "client_sizes = 10,10,10,10,10,10,10,10,10,20\n";
    CHECK_NOTHROW(ParseConfig(base + "scheme = scheme1\ns_devices = 5\n"));
    CHECK_THROWS_WITH_AS(ParseConfig(base + "scheme = scheme2\ns_devices = 5\n"),
                         doctest::Contains("balanced"), Error);
    CHECK_THROWS_WITH_AS(ParseConfig(base + "sweep = scheme\nsweep_values = full,scheme2:5\n"),
                         doctest::Contains("balanced"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "client_sizes = 1,2\n"), Error);
  }

  TEST_CASE("sweeps") {
    const ExperimentConfig c = ParseConfig(kMinimal + "sweep = K\nsweep_values = 1, 5,10\n");
    CHECK(c.sweep == SweepAxis::kK);
    CHECK(c.sweep_values == std::vector<std::string>{"1", "5", "10"});
    CHECK_THROWS_AS(ParseConfig(kMinimal + "sweep = K\n"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "sweep_values = 1\n"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "sweep = K\nsweep_values = 0\n"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "sweep = rho\nsweep_values = 0.5,1.5\n"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "sweep = scheme\nsweep_values = scheme1:11\n"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "sweep = size\nsweep_values = 1\n"), Error);
    CHECK(SweepAxisName(SweepAxis::kEta) == std::string("eta"));
  }

  TEST_CASE("scheme and matrix syntax") {
    CHECK(ParseScheme("full").kind == SchemeKind::kFull);
    const Scheme s = ParseScheme("scheme2:4");
    CHECK(s.kind == SchemeKind::kSchemeII);
    CHECK(s.S == 4);
    CHECK(FormatScheme(s) == "scheme2:4");
    CHECK(FormatScheme(Scheme::Full()) == "full");
    CHECK_THROWS_AS(ParseScheme("scheme3:1"), Error);
    CHECK_THROWS_AS(ParseScheme("scheme1"), Error);
    CHECK(ParseMatrix("5,-2;-2,1") == Matrix{{5, -2}, {-2, 1}});
    CHECK_THROWS_AS(ParseMatrix("1,2;3"), Error);
    const ExperimentConfig c = ParseConfig(kMinimal + "sigma = 2,0;0,3\n");
    CHECK(c.sigma == Matrix{{2, 0}, {0, 3}});
  }

  TEST_CASE("logistic keys") {
    const ExperimentConfig c =
        ParseConfig(kMinimal + "model = logistic\nclasses = 4\nfeatures = 3\nridge = 0.5\n");
    CHECK(c.model == "logistic");
    CHECK(c.classes == 4);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "model = logistic\nridge = 0\n"), Error);
    CHECK_THROWS_AS(ParseConfig(kMinimal + "model = neural\n"), Error);
  }

  TEST_CASE("missing file is an io error") {
    try {
      LoadConfigFile("/nonexistent/fald.cfg");
      FAIL("expected an io error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIo);
    }
  }
}
