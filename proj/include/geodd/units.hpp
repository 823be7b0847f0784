// Copyright 2026 The geodd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Unit convention: time in us, Hamiltonian coefficients in rad/us.
//
//   quantity                  as quoted            coefficient used
//   FID detuning              Delta = 1 MHz        pi*Delta = pi       (H = pi Delta sigma_z)
//   Overhauser std-dev        sigma = pi*0.13 MHz  pi*0.13             (delta0 sigma_z)
//   OU std-dev                sigma = 1.5 MHz      pi*1.5              (same sigma_z convention)
//   Rabi rate                 Omega = 2 pi MHz     2 pi
//   relaxation                Gamma = 1 kHz        1e-3 1/us
//
// A detuning of f MHz splits the levels by 2 pi f rad/us, i.e. a sigma_z
// coefficient of pi f; the OU amplitude follows that reading.

#include "geodd/linalg.hpp"

namespace geodd::defaults {

inline constexpr double kFidDelta = 1.0;
inline constexpr double kOverhauserSigma = kPi * 0.13;
inline constexpr double kRelaxation = 1e-3;
inline constexpr double kRabi = 2.0 * kPi;
inline constexpr double kGateDuration = 0.5;
inline constexpr double kGateTau = 0.0125;
inline constexpr double kFidTau = 0.01;
inline constexpr double kOuCorrelationTime = 0.25;
inline constexpr double kOuSigma = kPi * 1.5;
inline constexpr double kGateAngle = kPi / 4.0;

}  // namespace geodd::defaults
