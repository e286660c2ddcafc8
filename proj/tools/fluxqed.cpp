// Copyright 2026 The fluxqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: fluxqed {model,sweep,protocol,gate} --config FILE

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fluxqed/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Flux-qubit two-photon nonlinearity: model, spectra, protocol "
               "and gate checks"};
  app.set_version_flag("--version", fluxqed::version());
  app.require_subcommand(1);

  std::string config;
  fluxqed::CommandOptions opt;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"model", "analytic model at the [flux] bias (model.json)"},
      {"sweep", "flux sweep with exact diagonalization (sweep.csv, sweep.json)"},
      {"protocol",
       "protocol design, evolution oracle and loss curves (protocol.json, "
       "schedule.csv, loss_curves.csv)"},
      {"gate", "dual-rail phase gate check (gate.json, gate_logical.csv)"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config, "configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory")
        ->capture_default_str();
    sub->add_option("--workers", opt.workers,
                    "worker threads (0: config, then hardware)");
    sub->add_flag("--verbose", opt.verbose, "progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fluxqed::kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return fluxqed::run_command(name, config, opt, std::cerr);
}
