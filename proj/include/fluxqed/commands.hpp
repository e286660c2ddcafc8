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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fluxqed/config.hpp"
#include "fluxqed/gate.hpp"
#include "fluxqed/protocol.hpp"
#include "fluxqed/spectrum.hpp"
#include "json.hpp"

namespace fluxqed {

using Json = nlohmann::ordered_json;

std::string version();

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitInfeasible = 4,
};

/// Map the active exception onto an exit code and an error description.
int classify_exception(std::exception_ptr e, std::string& kind,
                       std::string& message);

Json provenance(const RunConfig& c);

/// Every analytic scalar at the [flux] bias.
Json model_report(const RunConfig& c);

struct SweepProducts {
  std::vector<FluxBias> points;
  std::vector<SweepRow> rows;
  Json summary;
};

/// Grid sweep, on/off detection, crossing gap, convergence and path slopes.
SweepProducts sweep_products(const RunConfig& c, unsigned workers);

/// Couplings frozen at the on point ([path] on, else [flux]).
HoldPoint hold_point(const RunConfig& c);

struct ProtocolProducts {
  ProtocolReport report;
  OracleResult oracle;
  std::vector<LossCurveRow> curves;
  Json summary;
};

ProtocolProducts protocol_products(const RunConfig& c, unsigned workers);

struct GateProducts {
  GateReport ideal;
  Json summary;
};

GateProducts gate_products(const RunConfig& c, unsigned workers);

/// CSV with a provenance comment line; numbers at 17 significant digits.
void write_csv(std::ostream& os, const RunConfig& c,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

struct CommandOptions {
  std::string out_dir = ".";
  unsigned workers = 0;  ///< 0: take [run] workers, then hardware
  bool verbose = false;
};

/// Run one subcommand; never throws. Errors go to stderr and, when the
/// output directory is writable, to error.json.
int run_command(const std::string& name, const std::string& config_path,
                const CommandOptions& opt, std::ostream& log);

}  // namespace fluxqed
