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

#include <cmath>

#include "rpsse/errors.hpp"

namespace rpsse {

/// Symmetric two-site exchange model: J = <J> + site * sigma_J.
struct TwoSiteState {
  int site = 1;         // +1 or -1
  double sigma_j = 0;   // mT
  double tau_j = 1.0;   // ns

  /// k_ex = 1 / (2 tau_J), so that <dJ(t) dJ(0)> = sigma_J^2 exp(-t / tau_J).
  double exchange_rate() const { return 1.0 / (2.0 * tau_j); }
  double offset() const { return site * sigma_j; }
};

template <class Rng>
TwoSiteState twosite_init(Rng& rng, double sigma_j, double tau_j) {
  if (!(tau_j > 0.0)) throw ConfigError("two-site: tau_J must be positive");
  TwoSiteState s;
  s.sigma_j = sigma_j;
  s.tau_j = tau_j;
  s.site = (rng() >> 63) != 0 ? 1 : -1;
  return s;
}

/// Discrete-time Markov chain step with p_hop = 1 - exp(-k_ex dt).
template <class Rng>
TwoSiteState twosite_step(const TwoSiteState& state, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw ConfigError("twosite_step: time step must be positive");
  TwoSiteState next = state;
  const double p_hop = -std::expm1(-state.exchange_rate() * dt);
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  if (u < p_hop) next.site = -next.site;
  return next;
}

}  // namespace rpsse
