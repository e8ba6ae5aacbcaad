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

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "rpsse/errors.hpp"

namespace rpsse {

/// Orientation of a rigid body undergoing anisotropic rotational diffusion.
///
/// The quaternion maps body-frame vectors to the laboratory frame, so
/// J_lab = R J_mol with R = orientation.toRotationMatrix().
struct RotorState {
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d diffusion = Eigen::Vector3d::Zero();  // body-frame D_X, D_Y, D_Z in 1/ns
};

/// Orientation from ZYZ Euler angles: R = Rz(alpha) Ry(beta) Rz(gamma).
inline Eigen::Quaterniond from_euler_zyz(double alpha, double beta, double gamma) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return Eigen::Quaterniond(AngleAxisd(alpha, Vector3d::UnitZ()) * AngleAxisd(beta, Vector3d::UnitY()) *
                            AngleAxisd(gamma, Vector3d::UnitZ()));
}

/// ZYZ Euler angles (alpha, beta, gamma) with beta in [0, pi].
inline Eigen::Vector3d to_euler_zyz(const Eigen::Quaterniond& q) {
  const Eigen::Matrix3d r = q.normalized().toRotationMatrix();
  const double beta = std::acos(std::clamp(r(2, 2), -1.0, 1.0));
  double alpha = 0.0;
  double gamma = 0.0;
  if (std::sin(beta) > 1e-12) {
    alpha = std::atan2(r(1, 2), r(0, 2));
    gamma = std::atan2(r(2, 1), -r(2, 0));
  } else {
    // Gimbal lock: only alpha + gamma (or alpha - gamma) is defined.
    alpha = std::atan2(r(1, 0), r(0, 0));
    if (r(2, 2) < 0.0) alpha = std::atan2(-r(1, 0), -r(0, 0));
  }
  return {alpha, beta, gamma};
}

/// Uniform random orientation on SO(3) (normalised 4D Gaussian).
template <class Rng>
Eigen::Quaterniond uniform_orientation(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q;
  do {
    q.w() = normal(rng);
    q.x() = normal(rng);
    q.y() = normal(rng);
    q.z() = normal(rng);
  } while (q.norm() < 1e-12);
  return q.normalized();
}

template <class Rng>
RotorState rotor_init(Rng& rng, const Eigen::Vector3d& diffusion) {
  if ((diffusion.array() < 0.0).any()) throw ConfigError("rotor: diffusion constants must be >= 0");
  return RotorState{uniform_orientation(rng), diffusion};
}

/// Largest max(D) dt accepted by rotor_step.
inline constexpr double kRotorStepLimit = 0.1;

/// One Brownian step: a body-frame rotation whose angle about body axis a is
/// Normal(0, 2 D_a dt), composed on the right; the quaternion is renormalised.
template <class Rng>
RotorState rotor_step(const RotorState& state, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw StepSizeError("rotor_step: time step must be positive");
  if (state.diffusion.maxCoeff() * dt >= kRotorStepLimit) {
    throw StepSizeError("rotor_step: max(D) * dt must be < 0.1");
  }
  RotorState next = state;
  if (state.diffusion.isZero(0.0)) return next;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d angle;
  for (int a = 0; a < 3; ++a) angle[a] = std::sqrt(2.0 * state.diffusion[a] * dt) * normal(rng);
  const double theta = angle.norm();
  if (theta > 0.0) {
    const Eigen::Quaterniond kick(Eigen::AngleAxisd(theta, angle / theta));
    next.orientation = (state.orientation * kick).normalized();
  }
  return next;
}

inline Eigen::Matrix3d rotation_matrix(const RotorState& state) {
  return state.orientation.toRotationMatrix();
}

/// C_lab = R C_mol R^-1.
inline Eigen::Matrix3d rotate_tensor(const Eigen::Matrix3d& c_mol, const RotorState& state) {
  const Eigen::Matrix3d r = rotation_matrix(state);
  return r * c_mol * r.transpose();
}

}  // namespace rpsse
