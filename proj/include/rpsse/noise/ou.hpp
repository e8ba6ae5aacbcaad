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

#include <array>
#include <cmath>
#include <random>

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"

namespace rpsse {

/// Discretisation of the overdamped Langevin equation for the random fields.
enum class OuScheme {
  /// Exact exponential update; preserves the stationary law for any step.
  exact,
  /// Implicit-midpoint (Gronbech-Jensen style) update with a = dt / (2 tau).
  midpoint,
  /// Midpoint form with a = gamma_e^2 <dB^2> dt / (2 tau^2). Dimensionally
  /// inconsistent; kept only for reproduction studies.
  as_printed,
};

/// Six fluctuating field components dB_{i alpha} (mT), radical-major
/// ordering: (1x, 1y, 1z, 2x, 2y, 2z).
struct OUFieldState {
  std::array<double, 6> field{};
  double tau = 1.0;          // ns
  double mean_square = 0.0;  // mT^2
};

template <class Rng>
OUFieldState ou_init(Rng& rng, double mean_square, double tau) {
  if (!(tau > 0.0)) throw ConfigError("ou_init: correlation time must be positive");
  if (!(mean_square >= 0.0)) throw ConfigError("ou_init: mean square field must be >= 0");
  OUFieldState s;
  s.tau = tau;
  s.mean_square = mean_square;
  std::normal_distribution<double> normal(0.0, std::sqrt(mean_square));
  for (double& b : s.field) b = mean_square > 0.0 ? normal(rng) : 0.0;
  return s;
}

template <class Rng>
OUFieldState ou_step(const OUFieldState& state, double dt, Rng& rng, OuScheme scheme = OuScheme::exact) {
  if (!(dt > 0.0)) throw ConfigError("ou_step: time step must be positive");
  OUFieldState next = state;
  if (state.mean_square == 0.0) {
    next.field.fill(0.0);
    return next;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (scheme) {
    case OuScheme::exact: {
      const double decay = std::exp(-dt / state.tau);
      const double kick = std::sqrt(state.mean_square * -std::expm1(-2.0 * dt / state.tau));
      for (double& b : next.field) b = decay * b + kick * normal(rng);
      break;
    }
    case OuScheme::midpoint:
    case OuScheme::as_printed: {
      const double a = scheme == OuScheme::midpoint
                           ? dt / (2.0 * state.tau)
                           : constants::gamma_e * constants::gamma_e * state.mean_square * dt /
                                 (2.0 * state.tau * state.tau);
      const double zeta_sd = std::sqrt(2.0 * state.mean_square * dt / state.tau);
      for (double& b : next.field) b = ((1.0 - a) * b + zeta_sd * normal(rng)) / (1.0 + a);
      break;
    }
  }
  return next;
}

}  // namespace rpsse
