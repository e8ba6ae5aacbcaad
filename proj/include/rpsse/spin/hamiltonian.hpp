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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"
#include "rpsse/noise/process.hpp"
#include "rpsse/spin/hilbert_space.hpp"
#include "rpsse/spin/operator.hpp"
#include "rpsse/spin/system.hpp"

namespace rpsse {

/// How the scalar coefficient f_j(X) of a channel is computed from X.
struct ChannelSource {
  enum class Kind {
    random_field,   // gamma_e * dB[component]
    rotor_tensor,   // scale * [R T R^T](a, b)
    rotor_zeeman,   // mu_B/hbar * sum_a B_a [R T R^T](a, b)
    two_site,       // gamma_e * site * sigma_J
  };
  Kind kind = Kind::random_field;
  int component = 0;   // random_field
  int tensor = 0;      // rotor_*: index into the anisotropic tensor table
  int a = 0;
  int b = 0;
  double scale = 1.0;
};

/// One fluctuating term f_j(X(t)) A_j of V(t).
struct Channel {
  std::string label;
  SpinOperator op;
  ChannelSource source;
};

/// H(X) = H0 + sum_j f_j(X) A_j in rad/ns, plus the Haberkorn operator K.
///
/// Immutable after assembly; safe to share read-only between trajectory workers.
class FluctuatingHamiltonian {
 public:
  FluctuatingHamiltonian() = default;
  FluctuatingHamiltonian(HilbertSpace space, SpinOperator h0, std::vector<Channel> channels, SpinOperator reaction,
                         std::vector<Eigen::Matrix3d> anisotropic_tensors, Eigen::Vector3d field)
      : space_(std::move(space)),
        h0_(std::move(h0)),
        channels_(std::move(channels)),
        reaction_(std::move(reaction)),
        tensors_(std::move(anisotropic_tensors)),
        field_(std::move(field)) {}

  const HilbertSpace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  const SpinOperator& static_part() const { return h0_; }
  const SpinOperator& reaction() const { return reaction_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }

  /// Writes f_j(X) for every channel into out (size channel_count()).
  void evaluate(const ProcessState& x, std::span<double> out) const {
    if (out.size() != channels_.size()) throw ConfigError("evaluate: coefficient buffer has wrong size");
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    std::vector<Eigen::Matrix3d> rotated;
    bool need_rotation = false;
    for (const auto& c : channels_) {
      need_rotation = need_rotation || c.source.kind == ChannelSource::Kind::rotor_tensor ||
                      c.source.kind == ChannelSource::Kind::rotor_zeeman;
    }
    if (need_rotation) {
      r = rotation_matrix(x.rotor);
      rotated.reserve(tensors_.size());
      for (const auto& t : tensors_) rotated.push_back(r * t * r.transpose());
    }
    for (std::size_t j = 0; j < channels_.size(); ++j) {
      const auto& s = channels_[j].source;
      switch (s.kind) {
        case ChannelSource::Kind::random_field:
          out[j] = s.scale * x.fields.field[static_cast<std::size_t>(s.component)];
          break;
        case ChannelSource::Kind::rotor_tensor:
          out[j] = s.scale * rotated[static_cast<std::size_t>(s.tensor)](s.a, s.b);
          break;
        case ChannelSource::Kind::rotor_zeeman:
          out[j] = s.scale * field_.dot(rotated[static_cast<std::size_t>(s.tensor)].col(s.b));
          break;
        case ChannelSource::Kind::two_site:
          out[j] = s.scale * x.two_site.offset();
          break;
      }
    }
  }

  std::vector<double> evaluate(const ProcessState& x) const {
    std::vector<double> out(channels_.size());
    evaluate(x, out);
    return out;
  }

  /// f_j(X) for a single channel.
  double coefficient(std::size_t j, const ProcessState& x) const { return evaluate(x).at(j); }

  /// H0 + sum_j f_j A_j for given coefficients.
  SpinOperator hamiltonian(std::span<const double> f) const {
    SpinOperator h = h0_;
    for (std::size_t j = 0; j < channels_.size(); ++j) {
      if (f[j] != 0.0) h += f[j] * channels_[j].op;
    }
    return h.with_hermitian(true);
  }

 private:
  HilbertSpace space_;
  SpinOperator h0_;
  std::vector<Channel> channels_;
  SpinOperator reaction_;
  std::vector<Eigen::Matrix3d> tensors_;
  Eigen::Vector3d field_ = Eigen::Vector3d::Zero();
};

namespace detail {

inline const char* axis_name(int a) { return a == 0 ? "x" : (a == 1 ? "y" : "z"); }

inline Eigen::Matrix3d isotropic_part(const Eigen::Matrix3d& t) {
  return Eigen::Matrix3d::Identity() * (t.trace() / 3.0);
}

}  // namespace detail

/// Assembles H0, the fluctuation channels of the active noise model and K.
///
/// Without a rotor, coupling tensors enter H0 in full, rotated to the fixed
/// orientation. With a rotor, H0 keeps the isotropic parts and the anisotropic
/// remainders become channels whose coefficients follow R(t) T R(t)^T, so that
/// H0 = <H(t)> over the uniform orientation distribution.
inline FluctuatingHamiltonian assemble_hamiltonian(const SpinSystemSpec& spec, const NoiseModelSpec& noise = {},
                                                   const Eigen::Quaterniond& orientation =
                                                       Eigen::Quaterniond::Identity(),
                                                   std::size_t budget = kDefaultDimensionBudget) {
  using constants::gamma_e;
  noise.validate();
  HilbertSpace space = build_space(spec, budget);
  const std::size_t dim = space.dim();
  const Eigen::Matrix3d r0 = orientation.normalized().toRotationMatrix();
  auto fixed = [&](const Eigen::Matrix3d& t) -> Eigen::Matrix3d { return r0 * t * r0.transpose(); };

  SpinOperator h0 = SpinOperator::zero(dim);
  std::vector<Channel> channels;
  std::vector<Eigen::Matrix3d> tensors;
  const auto e_mats = angular_momentum(2);

  auto add_rotor_tensor = [&](const Eigen::Matrix3d& aniso, std::size_t site_x, std::size_t site_y, double scale,
                              const std::string& label) {
    if (aniso.norm() == 0.0) return;
    const int id = static_cast<int>(tensors.size());
    tensors.push_back(aniso);
    const auto mx = angular_momentum(space.site_dim(site_x));
    const auto my = angular_momentum(space.site_dim(site_y));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        Channel c;
        c.label = label + "[" + detail::axis_name(a) + detail::axis_name(b) + "]";
        c.op = kron_term(space, {{site_x, mx[a]}, {site_y, my[b]}}, 1.0, true);
        c.source.kind = ChannelSource::Kind::rotor_tensor;
        c.source.tensor = id;
        c.source.a = a;
        c.source.b = b;
        c.source.scale = scale;
        channels.push_back(std::move(c));
      }
    }
  };

  // Electron-electron coupling: -2J S1.S2 + S1.D.S2.
  if (spec.exchange != 0.0) {
    h0 += (-2.0 * gamma_e * spec.exchange) * tensor_coupling(space, 0, Eigen::Matrix3d::Identity(), 1);
  }
  if (spec.dipolar.norm() > 0.0) {
    if (noise.rotor) {
      add_rotor_tensor(spec.dipolar, 0, 1, gamma_e, "dipolar");
    } else {
      h0 += tensor_coupling(space, 0, gamma_e * fixed(spec.dipolar), 1);
    }
  }

  // Zeeman and hyperfine terms of each radical.
  std::size_t nucleus = 0;
  for (int i = 0; i < 2; ++i) {
    const auto& rad = spec.radicals[static_cast<std::size_t>(i)];
    const std::size_t e_site = HilbertSpace::electron_site(i);
    const std::string tag = "radical" + std::to_string(i + 1);
    if (spec.field.norm() > 0.0) {
      if (noise.rotor) {
        const Eigen::Matrix3d iso = detail::isotropic_part(rad.g);
        h0 += vector_coupling(space, e_site, constants::bohr_over_hbar * (iso.transpose() * spec.field));
        const Eigen::Matrix3d aniso = rad.g - iso;
        if (aniso.norm() > 0.0) {
          const int id = static_cast<int>(tensors.size());
          tensors.push_back(aniso);
          for (int b = 0; b < 3; ++b) {
            Channel c;
            c.label = tag + ".g[" + detail::axis_name(b) + "]";
            c.op = kron_term(space, {{e_site, e_mats[b]}}, 1.0, true);
            c.source.kind = ChannelSource::Kind::rotor_zeeman;
            c.source.tensor = id;
            c.source.b = b;
            c.source.scale = constants::bohr_over_hbar;
            channels.push_back(std::move(c));
          }
        }
      } else {
        h0 += vector_coupling(space, e_site, constants::bohr_over_hbar * (fixed(rad.g).transpose() * spec.field));
      }
    }
    for (const auto& n : rad.nuclei) {
      const std::size_t n_site = HilbertSpace::nucleus_site(nucleus);
      if (noise.rotor) {
        const Eigen::Matrix3d iso = detail::isotropic_part(n.hyperfine);
        if (iso(0, 0) != 0.0) h0 += tensor_coupling(space, n_site, gamma_e * iso, e_site);
        add_rotor_tensor(n.hyperfine - iso, n_site, e_site, gamma_e, tag + "." + n.label);
      } else if (n.hyperfine.norm() > 0.0) {
        h0 += tensor_coupling(space, n_site, gamma_e * fixed(n.hyperfine), e_site);
      }
      ++nucleus;
    }
  }

  if (noise.random_field) {
    for (int i = 0; i < 2; ++i) {
      for (int a = 0; a < 3; ++a) {
        Channel c;
        c.label = "random_field" + std::to_string(i + 1) + detail::axis_name(a);
        c.op = kron_term(space, {{HilbertSpace::electron_site(i), e_mats[a]}}, 1.0, true);
        c.source.kind = ChannelSource::Kind::random_field;
        c.source.component = 3 * i + a;
        c.source.scale = gamma_e;
        channels.push_back(std::move(c));
      }
    }
  }
  if (noise.two_site && noise.sigma_j != 0.0) {
    Channel c;
    c.label = "two_site_exchange";
    c.op = (-2.0 * tensor_coupling(space, 0, Eigen::Matrix3d::Identity(), 1)).with_hermitian(true);
    c.source.kind = ChannelSource::Kind::two_site;
    c.source.scale = gamma_e;
    channels.push_back(std::move(c));
  }

  SpinOperator k = haberkorn_operator(space, spec.propagated_k_singlet(), spec.propagated_k_triplet());
  return {std::move(space), h0.with_hermitian(true), std::move(channels), std::move(k), std::move(tensors),
          spec.field};
}

}  // namespace rpsse
