// Copyright 2026 The rpsse Authors
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

// Physical constants and unit conventions.
//
// Internally every energy is an angular frequency in rad/ns (hbar = 1), every
// time is in ns and every rate is in 1/ns. Couplings given in millitesla are
// converted with the free-electron gyromagnetic ratio below.

namespace rpsse::constants {

/// Free electron g-factor (CODATA 2018).
inline constexpr double g_electron = 2.00231930436256;

/// gamma_e = g_e mu_B / hbar in rad ns^-1 mT^-1 (CODATA 2018: 1.76085963023e11 rad s^-1 T^-1).
inline constexpr double gamma_e = 0.176085963023;

/// mu_B / hbar in rad ns^-1 mT^-1; multiplies B.g for the Zeeman term.
inline constexpr double bohr_over_hbar = gamma_e / g_electron;

/// Converts a coupling quoted in mT into rad/ns.
constexpr double mt_to_angular(double millitesla) { return gamma_e * millitesla; }

}  // namespace rpsse::constants
