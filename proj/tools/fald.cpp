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

// fald: command-line front end over the C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "fald/fald.h"

namespace {

int ExitCode(fald_status status) {
  switch (status) {
    case FALD_OK: return 0;
    case FALD_ERR_NUMERIC: return 3;
    case FALD_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated averaging Langevin dynamics simulator"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_dir;

  using Command = fald_status (*)(const fald_config*, int*);
  struct Sub {
    const char* name;
    const char* help;
    Command fn;
  };
  const Sub subs[] = {
      {"gen-data", "write the configured federation to data.csv", fald_cmd_gen_data},
      {"run", "run the base configuration and write curves", fald_cmd_run},
      {"sweep", "run every sweep value and write curves", fald_cmd_sweep},
      {"bounds", "evaluate the convergence bound curve", fald_cmd_bounds},
      {"privacy", "account the differential-privacy budget", fald_cmd_privacy},
      {"plan", "plan step size, horizon and local steps for target_eps", fald_cmd_plan},
  };
  Command chosen = nullptr;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("config", config_path, "key=value config file")->required();
    sub->add_option("-o,--output-dir", output_dir, "override output_dir");
    sub->callback([&chosen, fn = s.fn] { chosen = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  fald_config* config = nullptr;
  fald_status status = fald_config_load(config_path.c_str(), &config);
  if (status == FALD_OK && !output_dir.empty()) {
    status = fald_config_set_output_dir(config, output_dir.c_str());
  }
  int exit_code = 0;
  if (status == FALD_OK) status = chosen(config, &exit_code);
  fald_config_free(config);
  if (status != FALD_OK) {
    std::fprintf(stderr, "fald: %s\n", fald_last_error());
    return ExitCode(status);
  }
  return exit_code;
}
