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
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "rpsse/errors.hpp"
#include "rpsse/propagate/sse.hpp"

namespace rpsse {

inline constexpr std::size_t kDenseDimensionLimit = 256;

struct DensitySeries {
  std::vector<double> time;
  std::vector<DenseMatrix> rho;
};

/// Small-system oracle for the Haberkorn master equation: rho <- G rho G^dagger
/// with G = exp((-i Hbar - K) dt), using the same step-averaged Hbar as the SSE.
inline DensitySeries dense_propagate_density(const DenseMatrix& rho0, const FluctuatingHamiltonian& h,
                                             CoefficientSource& source, const Schedule& schedule) {
  schedule.validate();
  const std::size_t d = h.dim();
  if (d > kDenseDimensionLimit) throw CapacityError("dense_propagate_density: dimension exceeds 256");
  if (static_cast<std::size_t>(rho0.rows()) != d || rho0.rows() != rho0.cols()) {
    throw ConfigError("dense_propagate_density: density matrix has wrong shape");
  }
  const DenseMatrix h0 = h.static_part().matrix();
  const DenseMatrix k = h.reaction().matrix();
  std::vector<DenseMatrix> a;
  for (const auto& c : h.channels()) a.emplace_back(c.op.matrix());
  std::vector<double> fbar(h.channel_count());

  DensitySeries out;
  out.time.push_back(0.0);
  out.rho.push_back(rho0);
  DenseMatrix rho = rho0;
  const double dt = schedule.dt;
  const std::size_t steps = schedule.step_count();
  for (std::size_t n = 1; n <= steps; ++n) {
    source.average((n - 1) * dt, dt, schedule.substeps, fbar);
    DenseMatrix hbar = h0;
    for (std::size_t j = 0; j < a.size(); ++j) hbar += fbar[j] * a[j];
    const DenseMatrix g = ((cplx(0.0, -1.0) * hbar - k) * dt).exp();
    rho = g * rho * g.adjoint();
    if (n % static_cast<std::size_t>(schedule.record_stride) == 0 || n == steps) {
      out.time.push_back(n * dt);
      out.rho.push_back(rho);
    }
  }
  return out;
}

}  // namespace rpsse
