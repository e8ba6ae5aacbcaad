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
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rpsse/errors.hpp"
#include "rpsse/propagate/sse.hpp"
#include "rpsse/spin/hilbert_space.hpp"
#include "rpsse/spin/operator.hpp"

namespace rpsse {

enum class SamplingScheme { suz, spin_coherent, projection };

inline std::string scheme_name(SamplingScheme s) {
  switch (s) {
    case SamplingScheme::suz:
      return "suz";
    case SamplingScheme::spin_coherent:
      return "coherent";
    case SamplingScheme::projection:
      return "projection";
  }
  return "?";
}

inline SamplingScheme parse_scheme(const std::string& name) {
  if (name == "suz") return SamplingScheme::suz;
  if (name == "coherent" || name == "spin_coherent") return SamplingScheme::spin_coherent;
  if (name == "projection") return SamplingScheme::projection;
  throw ConfigError("unknown sampling scheme '" + name + "' (expected suz, coherent or projection)");
}

/// A random nuclear state |psi(xi)> together with the parameters xi it came from.
struct SampledNuclearState {
  SamplingScheme scheme = SamplingScheme::suz;
  std::vector<double> deviates;                     // suz: 2Z normals (re, im interleaved)
  std::vector<std::pair<double, double>> angles;    // coherent: (theta, phi) per nucleus
  std::size_t basis_index = 0;                      // projection
  Vector amplitudes;                                // c_n = <n|psi>, unit norm
};

/// Unit vector uniform on the sphere of C^Z: 2Z normal deviates, normalised.
template <class Rng>
SampledNuclearState draw_suz(std::size_t z, Rng& rng) {
  if (z == 0) throw ConfigError("draw_suz: Z must be >= 1");
  SampledNuclearState s;
  s.scheme = SamplingScheme::suz;
  s.deviates.resize(2 * z);
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : s.deviates) {
      x = normal(rng);
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  s.amplitudes.resize(static_cast<Eigen::Index>(z));
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t n = 0; n < z; ++n) {
    s.amplitudes[static_cast<Eigen::Index>(n)] = cplx(s.deviates[2 * n], s.deviates[2 * n + 1]) * inv;
  }
  return s;
}

/// Spin coherent state along n(theta, phi) for a spin of the given multiplicity,
/// in the m = +I .. -I basis: c_k = sqrt(C(2I, k)) cos^{2I-k}(theta/2) sin^k(theta/2) e^{i k phi}, k = I - m.
inline Vector spin_coherent_state(int multiplicity, double theta, double phi) {
  if (multiplicity < 1) throw ConfigError("spin_coherent_state: multiplicity must be >= 1");
  const int n = multiplicity - 1;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Vector v(multiplicity);
  for (int k = 0; k <= n; ++k) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double mag = std::sqrt(std::exp(log_binom)) * std::pow(c, n - k) * std::pow(s, k);
    v[k] = std::polar(mag, k * phi);
  }
  return v;
}

/// Product of independent spin coherent states, one per nucleus, with
/// (theta, phi) uniform on the sphere.
template <class Rng>
SampledNuclearState draw_spin_coherent(const HilbertSpace& space, Rng& rng) {
  SampledNuclearState s;
  s.scheme = SamplingScheme::spin_coherent;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector psi = Vector::Ones(1);
  for (std::size_t k = 0; k < space.nucleus_count(); ++k) {
    const double theta = std::acos(1.0 - 2.0 * unit(rng));
    const double phi = 2.0 * M_PI * unit(rng);
    s.angles.emplace_back(theta, phi);
    const Vector local = spin_coherent_state(space.site_dim(HilbertSpace::nucleus_site(k)), theta, phi);
    Vector next(psi.size() * local.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) next.segment(i * local.size(), local.size()) = psi[i] * local;
    psi = std::move(next);
  }
  s.amplitudes = std::move(psi);
  return s;
}

/// A uniformly chosen nuclear basis state |M>.
template <class Rng>
SampledNuclearState draw_projection(const HilbertSpace& space, Rng& rng) {
  SampledNuclearState s;
  s.scheme = SamplingScheme::projection;
  const std::size_t z = space.nuclear_dim();
  std::uniform_int_distribution<std::size_t> pick(0, z - 1);
  s.basis_index = pick(rng);
  s.amplitudes = Vector::Zero(static_cast<Eigen::Index>(z));
  s.amplitudes[static_cast<Eigen::Index>(s.basis_index)] = 1.0;
  return s;
}

template <class Rng>
SampledNuclearState draw_nuclear_state(SamplingScheme scheme, const HilbertSpace& space, Rng& rng) {
  switch (scheme) {
    case SamplingScheme::suz:
      return draw_suz(space.nuclear_dim(), rng);
    case SamplingScheme::spin_coherent:
      return draw_spin_coherent(space, rng);
    case SamplingScheme::projection:
      return draw_projection(space, rng);
  }
  throw ConfigError("unknown sampling scheme");
}

/// |S> (x) |psi>, with |S> = (|ud> - |du>) / sqrt(2).
inline SpinState initial_pair_state(const HilbertSpace& space, const SampledNuclearState& nuclear) {
  const auto z = static_cast<Eigen::Index>(space.nuclear_dim());
  if (nuclear.amplitudes.size() != z) throw ConfigError("initial_pair_state: nuclear state has wrong dimension");
  if (std::abs(nuclear.amplitudes.norm() - 1.0) > 1e-10) {
    throw ConfigError("initial_pair_state: nuclear state is not normalised");
  }
  SpinState s;
  s.psi = Vector::Zero(4 * z);
  const double r = 1.0 / std::sqrt(2.0);
  s.psi.segment(z, z) = r * nuclear.amplitudes;
  s.psi.segment(2 * z, z) = -r * nuclear.amplitudes;
  return s;
}

/// Single-pass mean/variance accumulator with a parallel merge (Chan et al.).
struct TraceEstimate {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const TraceEstimate& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / n;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / n;
    count += other.count;
  }

  bool has_sem() const { return count >= 2; }

  /// Unbiased sample variance; NaN when fewer than two samples.
  double variance() const {
    return has_sem() ? std::max(m2, 0.0) / static_cast<double>(count - 1) : std::numeric_limits<double>::quiet_NaN();
  }

  double sem() const { return has_sem() ? std::sqrt(variance() / static_cast<double>(count)) : variance(); }

  /// Half-width of the mean +- 2 SEM band.
  double two_sem() const { return 2.0 * sem(); }
};

inline TraceEstimate estimate_trace(std::span<const double> samples) {
  TraceEstimate e;
  for (double x : samples) e.add(x);
  return e;
}

}  // namespace rpsse
