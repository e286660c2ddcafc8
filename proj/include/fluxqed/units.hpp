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

#include <numbers>

namespace fluxqed::units {

// CODATA 2018 exact values.
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);
/// Conductance quantum G0 = 2 e^2 / h.
inline constexpr double kConductanceQuantum =
    2.0 * kElementaryCharge * kElementaryCharge / kPlanck;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGHz = 1e9;
inline constexpr double kMHz = 1e6;

/// Ordinary frequency in GHz to angular frequency in rad/s.
constexpr double angular(double f_GHz) { return kTwoPi * f_GHz * kGHz; }
/// Angular frequency in rad/s to ordinary frequency in GHz.
constexpr double ordinary_GHz(double w) { return w / (kTwoPi * kGHz); }

}  // namespace fluxqed::units
