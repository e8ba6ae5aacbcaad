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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"

namespace rpsse {

struct Nucleus {
  std::string label;
  int two_spin = 1;  // 2I, so I = 1/2 is stored as 1
  Eigen::Matrix3d hyperfine = Eigen::Matrix3d::Zero();  // mT

  double spin() const { return 0.5 * two_spin; }
  int multiplicity() const { return two_spin + 1; }
};

struct Radical {
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity() * constants::g_electron;
  std::vector<Nucleus> nuclei;
};

/// Declarative description of a radical pair. Couplings in mT, rates in 1/ns.
///
/// Recombination follows the convention k_S = k_b + k_f, k_T = k_f' + k_f:
/// the symmetric part k_f is factored out of the propagation (see
/// propagated_rates) and restored analytically on output.
struct SpinSystemSpec {
  std::array<Radical, 2> radicals{};
  double exchange = 0.0;                                  // J, mT
  Eigen::Matrix3d dipolar = Eigen::Matrix3d::Zero();      // mT, symmetric traceless
  Eigen::Vector3d field = Eigen::Vector3d::Zero();        // mT
  double k_singlet = 0.0;                                 // 1/ns
  double k_triplet = 0.0;                                 // 1/ns
  double k_free = 0.0;                                    // 1/ns

  std::size_t nucleus_count() const { return radicals[0].nuclei.size() + radicals[1].nuclei.size(); }

  void validate() const {
    for (const auto& r : radicals) {
      if (!r.g.allFinite()) throw ConfigError("g-tensor has non-finite entries");
      for (const auto& n : r.nuclei) {
        if (n.two_spin < 1) throw ConfigError("nucleus '" + n.label + "': spin must be a positive half-integer");
        if (n.multiplicity() > 10) throw ConfigError("nucleus '" + n.label + "': spins above 9/2 are not supported");
        if (!n.hyperfine.allFinite()) throw ConfigError("nucleus '" + n.label + "': non-finite hyperfine tensor");
      }
    }
    const double dnorm = dipolar.norm();
    if (!dipolar.allFinite()) throw ConfigError("dipolar tensor has non-finite entries");
    if ((dipolar - dipolar.transpose()).norm() > 1e-10 * std::max(dnorm, 1.0)) {
      throw ConfigError("dipolar tensor must be symmetric");
    }
    if (std::abs(dipolar.trace()) > 1e-10 * std::max(dnorm, 1e-300) && dnorm > 0.0) {
      throw ConfigError("dipolar tensor must be traceless");
    }
    if (!field.allFinite() || !std::isfinite(exchange)) throw ConfigError("non-finite field or exchange");
    if (!(k_singlet >= 0.0) || !(k_triplet >= 0.0) || !(k_free >= 0.0)) {
      throw ConfigError("recombination rates must be >= 0");
    }
    if (k_free > k_singlet || k_free > k_triplet) {
      throw ConfigError("k_f must not exceed k_S or k_T");
    }
  }

  /// Rates that enter K once the uniform decay k_f is factored out.
  double propagated_k_singlet() const { return k_singlet - k_free; }
  double propagated_k_triplet() const { return k_triplet - k_free; }
};

/// Converts a spin quantum number given as a double (0.5, 1, 1.5, ...) to 2I.
inline int two_spin_from(double spin) {
  const double twice = 2.0 * spin;
  const double rounded = std::round(twice);
  if (!(spin > 0.0) || std::abs(twice - rounded) > 1e-9) {
    throw ConfigError("spin quantum number must be a positive half-integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace rpsse
