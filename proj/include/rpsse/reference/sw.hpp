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
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"
#include "rpsse/reference/nz.hpp"
#include "rpsse/reference/relaxation.hpp"
#include "rpsse/spin/operator.hpp"
#include "rpsse/spin/system.hpp"

namespace rpsse {

/// Classical nuclear spin vectors, radical 1's nuclei first.
struct SWVectorSet {
  std::vector<Eigen::Vector3d> vectors;
};

/// Directions uniform on the sphere, lengths sqrt(I (I + 1)).
template <class Rng>
SWVectorSet sw_sample(const SpinSystemSpec& spec, Rng& rng) {
  SWVectorSet set;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& rad : spec.radicals) {
    for (const auto& n : rad.nuclei) {
      Eigen::Vector3d v;
      do {
        v = {normal(rng), normal(rng), normal(rng)};
      } while (v.norm() < 1e-12);
      set.vectors.push_back(v.normalized() * std::sqrt(n.spin() * (n.spin() + 1.0)));
    }
  }
  return set;
}

/// Electron-only Hamiltonian (rad/ns) with the classical hyperfine fields
/// gamma_e A^T I added to each radical's Zeeman field.
inline DenseMatrix sw_electron_hamiltonian(const SpinSystemSpec& spec, const SWVectorSet& set) {
  using constants::gamma_e;
  const HilbertSpace space;
  if (set.vectors.size() != spec.nucleus_count()) throw ConfigError("sw: vector count does not match nuclei");
  SpinOperator h = SpinOperator::zero(4);
  if (spec.exchange != 0.0) h += (-2.0 * gamma_e * spec.exchange) * tensor_coupling(space, 0, Eigen::Matrix3d::Identity(), 1);
  if (spec.dipolar.norm() > 0.0) h += tensor_coupling(space, 0, gamma_e * spec.dipolar, 1);
  std::size_t k = 0;
  for (int i = 0; i < 2; ++i) {
    const auto& rad = spec.radicals[static_cast<std::size_t>(i)];
    Eigen::Vector3d omega = constants::bohr_over_hbar * (rad.g.transpose() * spec.field);
    for (const auto& n : rad.nuclei) omega += gamma_e * (n.hyperfine.transpose() * set.vectors[k++]);
    h += vector_coupling(space, HilbertSpace::electron_site(i), omega);
  }
  return h.matrix();
}

/// Quadrature for an electron-space NZ kernel: resolves the shortest
/// correlation time and the coherent dynamics, runs to the kernel tolerance.
inline NzQuadrature auto_quadrature(const RelaxationModel& model, double h_norm, double tolerance = 1e-8) {
  double tau_min = std::numeric_limits<double>::infinity(), tau_max = 0.0;
  for (const auto& t : model.terms) {
    if (!std::isfinite(t.tau)) throw NumericError("nz: correlation function has not decayed (static disorder)");
    tau_min = std::min(tau_min, t.tau);
    tau_max = std::max(tau_max, t.tau);
  }
  NzQuadrature q;
  q.tolerance = tolerance;
  if (model.terms.empty()) return q;
  q.cutoff = 1.05 * tau_max * -std::log(tolerance);
  q.step = std::min(tau_min / 40.0, 0.05 / std::max(h_norm, 1e-12));
  q.step = std::max(q.step, q.cutoff / 200000.0);
  return q;
}

struct SWResult {
  std::vector<double> time;
  std::vector<double> survival;
  std::vector<double> singlet;
  std::vector<double> triplet;
};

/// Averages electron-only dynamics from a singlet start over classical vector
/// samples; optional electron-space NZ relaxation recomputed per sample.
inline SWResult sw_propagate(const SpinSystemSpec& spec, const std::vector<SWVectorSet>& samples,
                             const RelaxationModel* relaxation, const std::vector<double>& times) {
  spec.validate();
  if (samples.empty()) throw ConfigError("sw_propagate: no vector samples");
  if (times.empty()) throw ConfigError("sw_propagate: empty time grid");
  const HilbertSpace space;
  const DenseMatrix k = haberkorn_operator(space, spec.propagated_k_singlet(), spec.propagated_k_triplet()).matrix();
  const DenseMatrix ps = singlet_projector(space).matrix();
  Vector s = Vector::Zero(4);
  s[1] = 1.0 / std::sqrt(2.0);
  s[2] = -1.0 / std::sqrt(2.0);
  const DenseMatrix rho0 = s * s.adjoint();
  const Vector vec0 = Eigen::Map<const Vector>(rho0.data(), 16);
  // Row vectors giving tr(rho) and tr(P_S rho) from vec(rho).
  Eigen::RowVectorXcd tr_row = Eigen::RowVectorXcd::Zero(16), ps_row(16);
  for (int a = 0; a < 4; ++a) tr_row[a * 4 + a] = 1.0;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) ps_row[c * 4 + r] = ps(c, r);

  SWResult res;
  res.time = times;
  res.survival.assign(times.size(), 0.0);
  res.singlet.assign(times.size(), 0.0);
  for (const auto& set : samples) {
    const DenseMatrix h = sw_electron_hamiltonian(spec, set);
    DenseMatrix l = coherent_superoperator(h, k);
    if (relaxation && !relaxation->empty()) {
      const double h_norm = h.cwiseAbs().rowwise().sum().maxCoeff();
      l += NzSuperoperator(h, k, *relaxation, auto_quadrature(*relaxation, h_norm)).matrix();
    }
    std::map<double, DenseMatrix> cache;
    Vector v = vec0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double dt = i == 0 ? times[0] : times[i] - times[i - 1];
      if (dt < 0.0) throw ConfigError("sw_propagate: time grid must be increasing");
      if (dt > 0.0) {
        auto it = cache.find(dt);
        if (it == cache.end()) it = cache.emplace(dt, DenseMatrix((l * dt).exp())).first;
        v = it->second * v;
      }
      res.survival[i] += (tr_row * v)(0).real();
      res.singlet[i] += (ps_row * v)(0).real();
    }
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  res.triplet.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    res.survival[i] *= inv;
    res.singlet[i] *= inv;
    res.triplet[i] = res.survival[i] - res.singlet[i];
  }
  return res;
}

}  // namespace rpsse
