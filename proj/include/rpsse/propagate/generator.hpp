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
#include <vector>

#include <Eigen/Sparse>

#include "rpsse/errors.hpp"
#include "rpsse/spin/hamiltonian.hpp"

namespace rpsse {

/// Trapezoidal average (1/dt) int f_j dt over uniformly spaced samples.
/// samples[k][j] is f_j at t0 + k dt / (n - 1).
inline std::vector<double> trapezoid_average(const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 2) throw ConfigError("effective_generator: path needs at least two samples");
  const std::size_t n = samples.size();
  const std::size_t channels = samples.front().size();
  std::vector<double> avg(channels, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (samples[k].size() != channels) throw ConfigError("effective_generator: ragged sample path");
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < channels; ++j) avg[j] += w * samples[k][j];
  }
  for (double& a : avg) a /= static_cast<double>(n - 1);
  return avg;
}

/// Effective generator of one spin step, Omega = H0 + sum_j fbar_j A_j - i K,
/// stored on a sparsity pattern shared by all steps of a trajectory.
struct StepGenerator {
  SparseMatrix omega;
  std::vector<double> mean_coefficients;
  double t0 = 0.0;
  double dt = 0.0;

  /// y = -i Omega x, the right-hand side of the SSE for this step.
  void apply_rhs(const Vector& x, Vector& y) const {
    y.noalias() = omega * x;
    y *= cplx(0.0, -1.0);
  }
};

/// Precomputes H0, every A_j and K on their union sparsity pattern so a step
/// generator is a single pass over the stored values.
class GeneratorAssembler {
 public:
  explicit GeneratorAssembler(const FluctuatingHamiltonian& h) {
    const auto n = static_cast<Eigen::Index>(h.dim());
    // Structural union: sum of |entries| with unit weights so nothing cancels.
    SparseMatrix pattern(n, n);
    auto add_pattern = [&](const SpinOperator& op) {
      SparseMatrix mag = op.matrix().cwiseAbs().cast<cplx>();
      pattern = SparseMatrix(pattern + mag);
    };
    add_pattern(h.static_part());
    add_pattern(h.reaction());
    for (const auto& c : h.channels()) add_pattern(c.op);
    pattern.makeCompressed();
    pattern_ = pattern;
    static_values_ = aligned(h.static_part().matrix(), pattern_);
    const std::vector<cplx> k = aligned(h.reaction().matrix(), pattern_);
    for (std::size_t i = 0; i < static_values_.size(); ++i) static_values_[i] -= cplx(0.0, 1.0) * k[i];
    channel_values_.reserve(h.channel_count());
    for (const auto& c : h.channels()) channel_values_.push_back(aligned(c.op.matrix(), pattern_));
  }

  std::size_t channel_count() const { return channel_values_.size(); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(pattern_.nonZeros()); }

  /// Fills gen.omega in place from mean coefficients.
  void fill(std::span<const double> fbar, StepGenerator& gen) const {
    if (fbar.size() != channel_values_.size()) throw ConfigError("effective_generator: coefficient count mismatch");
    if (gen.omega.nonZeros() != pattern_.nonZeros() || gen.omega.rows() != pattern_.rows()) gen.omega = pattern_;
    cplx* out = gen.omega.valuePtr();
    const std::size_t nnz = static_values_.size();
    std::copy(static_values_.begin(), static_values_.end(), out);
    for (std::size_t j = 0; j < channel_values_.size(); ++j) {
      const double f = fbar[j];
      if (f == 0.0) continue;
      const cplx* a = channel_values_[j].data();
      for (std::size_t i = 0; i < nnz; ++i) out[i] += f * a[i];
    }
    gen.mean_coefficients.assign(fbar.begin(), fbar.end());
  }

 private:
  static std::vector<cplx> aligned(const SparseMatrix& m, const SparseMatrix& pattern) {
    std::vector<cplx> values(static_cast<std::size_t>(pattern.nonZeros()), cplx(0.0));
    for (Eigen::Index r = 0; r < pattern.outerSize(); ++r) {
      SparseMatrix::InnerIterator pit(pattern, r);
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
        while (pit && pit.col() < it.col()) ++pit;
        if (!pit || pit.col() != it.col()) throw std::logic_error("GeneratorAssembler: pattern is not a superset");
        values[static_cast<std::size_t>(&pit.value() - pattern.valuePtr())] = it.value();
      }
    }
    return values;
  }

  SparseMatrix pattern_;
  std::vector<cplx> static_values_;
  std::vector<std::vector<cplx>> channel_values_;
};

/// Builds the step generator from channel samples over [t0, t0 + dt].
inline StepGenerator effective_generator(const FluctuatingHamiltonian& h, const GeneratorAssembler& assembler,
                                         const std::vector<std::vector<double>>& path, double t0, double dt) {
  StepGenerator gen;
  gen.t0 = t0;
  gen.dt = dt;
  const auto fbar = trapezoid_average(path);
  if (fbar.size() != h.channel_count()) throw ConfigError("effective_generator: path has wrong channel count");
  assembler.fill(fbar, gen);
  return gen;
}

inline StepGenerator effective_generator(const FluctuatingHamiltonian& h,
                                         const std::vector<std::vector<double>>& path, double t0, double dt) {
  return effective_generator(h, GeneratorAssembler(h), path, t0, dt);
}

}  // namespace rpsse
