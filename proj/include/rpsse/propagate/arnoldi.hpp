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
#include <complex>
#include <string>
#include <utility>
#include <algorithm>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "rpsse/errors.hpp"

namespace rpsse {

struct KrylovOptions {
  int max_dim = 32;
  /// Accept when the estimated error is below tol * ||v||.
  double tol = 1e-10;
};

struct KrylovStats {
  int dim = 0;
  double error_estimate = 0.0;
  bool breakdown = false;
  bool converged = false;
};

/// Reusable storage for Arnoldi iterations. Works for any contiguous Eigen
/// dense object (state vectors, or density matrices treated as Liouville-space
/// vectors with the Frobenius inner product).
template <class Vec>
class ArnoldiExp {
 public:
  explicit ArnoldiExp(KrylovOptions opts = {}) : opts_(opts) {
    if (opts_.max_dim < 2) throw ConfigError("Krylov dimension must be >= 2");
  }

  const KrylovOptions& options() const { return opts_; }

  /// v <- exp(dt * A) v where apply(x, y) computes y = A x. Returns false
  /// (leaving v untouched) if the error estimate stays above tolerance at
  /// max_dim. A happy breakdown (invariant subspace) yields the exact result.
  template <class Apply>
  bool try_step(Apply&& apply, Vec& v, double dt, KrylovStats* stats = nullptr) {
    using Flat = Eigen::Map<Eigen::VectorXcd>;
    using Shaped = Eigen::Map<Vec>;
    const int m_max = opts_.max_dim;
    const Eigen::Index n = v.size();
    const double beta = v.norm();
    KrylovStats st;
    if (beta == 0.0 || dt == 0.0) {
      st.converged = true;
      if (stats) *stats = st;
      return true;
    }
    if (basis_.rows() != n || basis_.cols() < m_max + 1) basis_.resize(n, m_max + 1);
    hess_.setZero(m_max + 1, m_max);
    basis_.col(0) = Eigen::Map<const Eigen::VectorXcd>(v.data(), n) / beta;
    double cheap = 1.0;  // running prod(dt h_{i+1,i}) / m!
    for (int j = 0; j < m_max; ++j) {
      const Shaped x(basis_.col(j).data(), v.rows(), v.cols());
      apply(Vec(x), w_);
      Flat w(w_.data(), n);
      // Classical Gram-Schmidt with one reorthogonalisation pass.
      auto q = basis_.leftCols(j + 1);
      coeff_.noalias() = q.adjoint() * w;
      w.noalias() -= q * coeff_;
      corr_.noalias() = q.adjoint() * w;
      w.noalias() -= q * corr_;
      coeff_ += corr_;
      hess_.col(j).head(j + 1) = coeff_;
      const double h_next = w.norm();
      hess_(j + 1, j) = h_next;
      const int m = j + 1;
      const double scale = hess_.topLeftCorner(m, m).cwiseAbs().colwise().sum().maxCoeff();
      if (h_next <= 1e-14 * std::max(scale, 1e-300)) {
        st.breakdown = true;
        expo_ = (dt * hess_.topLeftCorner(m, m)).exp();
        st.dim = m;
        st.converged = true;
        assemble(v, beta, m);
        if (stats) *stats = st;
        return true;
      }
      basis_.col(j + 1) = w / h_next;
      cheap *= std::abs(dt) * h_next / m;
      if (cheap > 1e2 * opts_.tol && m < m_max) continue;
      // Expokit-style estimate from the augmented (m+1) x (m+1) exponential.
      Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(m + 1, m + 1);
      aug.topLeftCorner(m, m) = dt * hess_.topLeftCorner(m, m);
      aug(m, m - 1) = dt * h_next;
      expo_ = aug.exp();
      st.error_estimate = std::abs(expo_(m, 0));
      st.dim = m;
      if (st.error_estimate <= opts_.tol && std::isfinite(st.error_estimate)) {
        st.converged = true;
        assemble(v, beta, m);
        if (stats) *stats = st;
        return true;
      }
    }
    st.converged = false;
    if (stats) *stats = st;
    return false;
  }

  /// As try_step, but raises StepSizeError on non-convergence.
  template <class Apply>
  KrylovStats step(Apply&& apply, Vec& v, double dt) {
    KrylovStats st;
    if (!try_step(std::forward<Apply>(apply), v, dt, &st)) {
      throw StepSizeError("Krylov exponential did not converge at dimension " + std::to_string(opts_.max_dim) +
                          " (error estimate " + std::to_string(st.error_estimate) + "); reduce the time step");
    }
    return st;
  }

 private:
  void assemble(Vec& v, double beta, int m) {
    Eigen::Map<Eigen::VectorXcd> out(v.data(), v.size());
    out.noalias() = basis_.leftCols(m) * (beta * expo_.col(0).head(m));
  }

  KrylovOptions opts_;
  Eigen::MatrixXcd basis_;
  Eigen::MatrixXcd hess_;
  Eigen::MatrixXcd expo_;
  Eigen::VectorXcd coeff_;
  Eigen::VectorXcd corr_;
  Vec w_;
};

}  // namespace rpsse
