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
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"
#include "rpsse/spin/hilbert_space.hpp"
#include "rpsse/spin/operator.hpp"

namespace rpsse {

/// Channels A_j driven by one stochastic process with exponential correlation
/// g_jk(t) = amplitude_jk exp(-t / tau). Channels of different terms are uncorrelated.
struct RelaxationTerm {
  std::vector<SpinOperator> channels;
  std::vector<std::string> labels;
  Eigen::MatrixXd amplitude;  // g_jk(0), (rad/ns)^2
  double tau = 1.0;           // ns; +infinity for static disorder

  double correlation(std::size_t j, std::size_t k, double t) const {
    if (std::isinf(tau)) return amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    return amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * std::exp(-t / tau);
  }

  /// J_jk(0) = int_0^inf g_jk(t) dt = g_jk(0) tau.
  Eigen::MatrixXd spectral_density_zero() const {
    if (!std::isfinite(tau)) throw NumericError("relaxation: J(0) diverges for a non-decaying correlation function");
    return amplitude * tau;
  }

  /// Lindblad rates gamma_jk = 2 J_jk(0).
  Eigen::MatrixXd rates() const { return 2.0 * spectral_density_zero(); }
};

struct RelaxationModel {
  std::vector<RelaxationTerm> terms;

  bool empty() const { return terms.empty(); }

  void validate(std::size_t dim) const {
    for (const auto& t : terms) {
      const auto n = static_cast<Eigen::Index>(t.channels.size());
      if (t.amplitude.rows() != n || t.amplitude.cols() != n) {
        throw ConfigError("relaxation: amplitude matrix does not match channel count");
      }
      if (!(t.tau > 0.0)) throw ConfigError("relaxation: correlation time must be positive");
      for (const auto& a : t.channels) {
        if (a.dim() != dim) throw ConfigError("relaxation: channel operator has wrong dimension");
      }
      if ((t.amplitude - t.amplitude.transpose()).norm() > 1e-12 * std::max(1.0, t.amplitude.norm())) {
        throw ConfigError("relaxation: correlation matrix must be symmetric");
      }
      if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.amplitude);
        if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, t.amplitude.norm())) {
          throw ConfigError("relaxation: g(0) must be positive semidefinite (negative rate)");
        }
      }
    }
  }
};

/// Six isotropic random-field channels S_{i alpha} with <dB^2> in mT^2.
inline RelaxationTerm random_field_term(const HilbertSpace& space, double mean_square, double tau) {
  RelaxationTerm t;
  const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 3; ++a) {
      t.channels.push_back(spin_operator(space, HilbertSpace::electron_site(i), static_cast<Axis>(a)));
      t.labels.push_back("S" + std::to_string(i + 1) + axes[a]);
    }
  }
  const double g = constants::gamma_e * constants::gamma_e * mean_square;
  t.amplitude = Eigen::MatrixXd::Identity(6, 6) * g;
  t.tau = tau;
  return t;
}

/// Random-field term parameterised by its extreme-narrowing rate k_RF = 2 gamma_e^2 <dB^2> tau.
inline RelaxationTerm random_field_term_from_rate(const HilbertSpace& space, double k_rf, double tau) {
  return random_field_term(space, k_rf / (2.0 * constants::gamma_e * constants::gamma_e * tau), tau);
}

/// Two-site exchange modulation: channel -2 S1.S2 with amplitude (gamma_e sigma_J)^2.
inline RelaxationTerm two_site_term(const HilbertSpace& space, double sigma_j, double tau_j) {
  RelaxationTerm t;
  t.channels.push_back((-2.0 * tensor_coupling(space, 0, Eigen::Matrix3d::Identity(), 1)).with_hermitian(true));
  t.labels.push_back("exchange");
  const double g = constants::gamma_e * sigma_j;
  t.amplitude = Eigen::MatrixXd::Constant(1, 1, g * g);
  t.tau = tau_j;
  return t;
}

}  // namespace rpsse
