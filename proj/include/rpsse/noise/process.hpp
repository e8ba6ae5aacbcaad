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
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "rpsse/errors.hpp"
#include "rpsse/noise/ou.hpp"
#include "rpsse/noise/rotor.hpp"
#include "rpsse/noise/two_site.hpp"

namespace rpsse {

/// Which stochastic processes drive the Hamiltonian, and their parameters.
/// Any combination may be active; none active means a static Hamiltonian.
struct NoiseModelSpec {
  bool random_field = false;
  double rf_tau = 1.0;          // ns
  double rf_mean_square = 0.0;  // mT^2
  OuScheme ou_scheme = OuScheme::exact;

  bool rotor = false;
  Eigen::Vector3d rotor_diffusion = Eigen::Vector3d::Zero();  // 1/ns

  bool two_site = false;
  double sigma_j = 0.0;  // mT
  double tau_j = 1.0;    // ns

  bool any() const { return random_field || rotor || two_site; }

  void validate() const {
    if (random_field && !(rf_tau > 0.0)) throw ConfigError("noise: random-field tau must be positive");
    if (random_field && !(rf_mean_square >= 0.0)) throw ConfigError("noise: <dB^2> must be >= 0");
    if (rotor && (rotor_diffusion.array() < 0.0).any()) throw ConfigError("noise: rotor diffusion must be >= 0");
    if (two_site && !(tau_j > 0.0)) throw ConfigError("noise: tau_J must be positive");
  }
};

/// <dB^2> = k_RF / (2 gamma_e^2 tau), fixing the extreme-narrowing rate.
inline double rf_mean_square_from_rate(double k_rf, double tau) {
  return k_rf / (2.0 * constants::gamma_e * constants::gamma_e * tau);
}

/// Instantaneous value of every stochastic variable X(t).
struct ProcessState {
  OUFieldState fields{};
  RotorState rotor{};
  TwoSiteState two_site{};
};

/// Advances the active processes of a NoiseModelSpec. Inactive processes keep
/// their neutral values (zero fields, identity orientation, site +1).
class NoiseProcess {
 public:
  explicit NoiseProcess(NoiseModelSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  const NoiseModelSpec& spec() const { return spec_; }

  /// Draws X(0) from the stationary law of every active process.
  template <class Rng>
  ProcessState init(Rng& rng) const {
    ProcessState s;
    if (spec_.random_field) s.fields = ou_init(rng, spec_.rf_mean_square, spec_.rf_tau);
    if (spec_.rotor) s.rotor = rotor_init(rng, spec_.rotor_diffusion);
    if (spec_.two_site) s.two_site = twosite_init(rng, spec_.sigma_j, spec_.tau_j);
    return s;
  }

  template <class Rng>
  void step(ProcessState& s, double dt, Rng& rng) const {
    if (spec_.random_field) s.fields = ou_step(s.fields, dt, rng, spec_.ou_scheme);
    if (spec_.rotor) s.rotor = rotor_step(s.rotor, dt, rng);
    if (spec_.two_site) s.two_site = twosite_step(s.two_site, dt, rng);
  }

 private:
  NoiseModelSpec spec_;
};

}  // namespace rpsse
