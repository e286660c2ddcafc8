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

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fluxqed/circuit_model.hpp"
#include "fluxqed/protocol.hpp"
#include "fluxqed/spectrum.hpp"

namespace fluxqed {

struct SweepSpec {
  SweepGrid grid{-3.0, 3.0, 49, 1.2566, 1.2566, 1};
  double on_delta_window = 0.1;  ///< GHz; on point needs |delta| below this
};

/// Off and on flux points of the control path; detected from the sweep
/// when not given.
struct PathSpec {
  std::optional<FluxBias> off;
  std::optional<FluxBias> on;
  int samples = 33;
};

struct ProtocolSpec {
  LossParams loss;
  bool auto_delta_m = true;
  double on_off_min = 100.0;
  double scan_lo = -0.536;  ///< GHz
  double scan_hi = -0.041;
  int scan_points = 100;
  int schedule_samples = 401;
};

struct RunConfig {
  CircuitParams circuit;
  BasisSpec basis;
  FluxBias flux{-0.716867, 1.2566};
  SweepSpec sweep;
  PathSpec path;
  ProtocolSpec protocol;
  bool gate_use_protocol = true;
  std::uint64_t seed = 1;
  unsigned workers = 0;  ///< 0: available parallelism

  /// Every resolved value as "section.key = value", 17 significant digits,
  /// in a fixed order. The config hash is computed from this text.
  std::string canonical() const;
  std::string hash() const;
  /// Resolved values grouped by section, for embedding in reports.
  std::map<std::string, std::map<std::string, std::string>> sections() const;
};

using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

/// Parse an INI-style file, or a JSON report carrying a "config" object.
RawConfig read_raw_config(const std::string& path);
RawConfig parse_raw_config(const std::string& text, bool json);

/// Resolve and validate; throws ConfigError listing every problem found.
RunConfig build_config(const RawConfig& raw);
RunConfig load_config(const std::string& path);

/// Shortest text that parses back to the same double, at most 17 digits.
std::string format_double(double x);

std::string fnv1a_hex(const std::string& text);

}  // namespace fluxqed
