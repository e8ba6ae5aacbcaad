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
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "rpsse/errors.hpp"
#include "rpsse/reference/relaxation.hpp"
#include "rpsse/spin/operator.hpp"

namespace rpsse {

struct NzQuadrature {
  double step = 0.01;     // ns
  double cutoff = 10.0;   // ns
  /// Kernel must have decayed below tolerance * max |g(0)| at the cutoff.
  double tolerance = 1e-8;
};

/// Second-order Markovian relaxation superoperator
///   R rho = -sum_jk int_0^inf g_jk(s) [A_j, e^{L0 s} [A_k, rho]] ds,
/// with e^{L0 s} X = G X G^dagger, G = exp((-i H0 - K) s), by trapezoidal quadrature.
class NzSuperoperator {
 public:
  NzSuperoperator(const DenseMatrix& h0, const DenseMatrix& k, const RelaxationModel& model, NzQuadrature quad = {}) {
    dim_ = static_cast<std::size_t>(h0.rows());
    model.validate(dim_);
    if (!(quad.step > 0.0) || !(quad.cutoff > quad.step)) throw ConfigError("nz: need 0 < step < cutoff");
    const auto n = static_cast<std::size_t>(std::ceil(quad.cutoff / quad.step - 1e-9));
    const double ds = quad.cutoff / static_cast<double>(n);
    const DenseMatrix g1 = ((cplx(0.0, -1.0) * h0 - k) * ds).exp();
    for (const auto& term : model.terms) {
      const double g0 = term.amplitude.cwiseAbs().maxCoeff();
      double g_end = 0.0;
      for (std::size_t j = 0; j < term.channels.size(); ++j)
        for (std::size_t c = 0; c < term.channels.size(); ++c) g_end = std::max(g_end, std::abs(term.correlation(j, c, quad.cutoff)));
      if (g0 > 0.0 && g_end > quad.tolerance * g0) {
        throw NumericError("nz: correlation function has not decayed at the quadrature cutoff (non-decaying kernel)");
      }
      Term t;
      for (const auto& a : term.channels) t.channels.emplace_back(a.matrix());
      t.amplitude = term.amplitude;
      t.weights.resize(n + 1);
      for (std::size_t q = 0; q <= n; ++q) {
        const double w = (q == 0 || q == n) ? 0.5 * ds : ds;
        const double shape = std::isinf(term.tau) ? 1.0 : std::exp(-(q * ds) / term.tau);
        t.weights[q] = w * shape;
      }
      terms_.push_back(std::move(t));
    }
    propagators_.reserve(n + 1);
    DenseMatrix g = DenseMatrix::Identity(h0.rows(), h0.cols());
    for (std::size_t q = 0; q <= n; ++q) {
      propagators_.push_back(g);
      g = (g1 * g).eval();
    }
  }

  std::size_t dim() const { return dim_; }

  DenseMatrix apply(const DenseMatrix& rho) const {
    DenseMatrix out = DenseMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& t : terms_) {
      const std::size_t nc = t.channels.size();
      // Y_k = sum_q w_q f(s_q) G_q [A_k, rho] G_q^dagger
      std::vector<DenseMatrix> y(nc, DenseMatrix::Zero(rho.rows(), rho.cols()));
      for (std::size_t c = 0; c < nc; ++c) {
        const DenseMatrix comm = t.channels[c] * rho - rho * t.channels[c];
        for (std::size_t q = 0; q < propagators_.size(); ++q) {
          if (t.weights[q] == 0.0) continue;
          y[c].noalias() += t.weights[q] * (propagators_[q] * comm * propagators_[q].adjoint());
        }
      }
      for (std::size_t j = 0; j < nc; ++j) {
        DenseMatrix z = DenseMatrix::Zero(rho.rows(), rho.cols());
        for (std::size_t c = 0; c < nc; ++c) z += t.amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) * y[c];
        out -= t.channels[j] * z - z * t.channels[j];
      }
    }
    return out;
  }

  /// Dense D^2 x D^2 matrix acting on column-major vec(rho).
  DenseMatrix matrix() const {
    if (dim_ > 16) throw CapacityError("nz: dense superoperator only for D <= 16");
    const auto d = static_cast<Eigen::Index>(dim_);
    const DenseMatrix id = DenseMatrix::Identity(d, d);
    DenseMatrix s = DenseMatrix::Zero(d * d, d * d);
    for (const auto& t : terms_) {
      // vec(G X G^dagger) = (conj(G) (x) G) vec(X)
      DenseMatrix kernel = DenseMatrix::Zero(d * d, d * d);
      for (std::size_t q = 0; q < propagators_.size(); ++q) {
        if (t.weights[q] == 0.0) continue;
        kernel += t.weights[q] * DenseMatrix(Eigen::kroneckerProduct(DenseMatrix(propagators_[q].conjugate()), propagators_[q]));
      }
      std::vector<DenseMatrix> comm;
      for (const auto& a : t.channels) comm.push_back(DenseMatrix(Eigen::kroneckerProduct(id, a)) - DenseMatrix(Eigen::kroneckerProduct(DenseMatrix(a.transpose()), id)));
      for (std::size_t j = 0; j < comm.size(); ++j)
        for (std::size_t c = 0; c < comm.size(); ++c) {
          const double amp = t.amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
          if (amp != 0.0) s -= amp * (comm[j] * kernel * comm[c]);
        }
    }
    return s;
  }

 private:
  struct Term {
    std::vector<DenseMatrix> channels;
    Eigen::MatrixXd amplitude;
    std::vector<double> weights;  // quadrature weight times exp(-s_q / tau)
  };

  std::size_t dim_ = 0;
  std::vector<Term> terms_;
  std::vector<DenseMatrix> propagators_;
};

inline NzSuperoperator nz_superoperator(const SpinOperator& h0, const SpinOperator& k, const RelaxationModel& model,
                                        NzQuadrature quad = {}) {
  if (h0.dim() > 256) throw CapacityError("nz: dimension exceeds 256");
  return NzSuperoperator(h0.matrix(), k.matrix(), model, quad);
}

/// Dense Liouvillian L0 rho = -i[H0, rho] - {K, rho} on column-major vec(rho).
inline DenseMatrix coherent_superoperator(const DenseMatrix& h0, const DenseMatrix& k) {
  const auto d = h0.rows();
  DenseMatrix s(d * d, d * d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) {
      DenseMatrix e = DenseMatrix::Zero(d, d);
      e(r, c) = 1.0;
      const DenseMatrix y = cplx(0.0, -1.0) * (h0 * e - e * h0) - (k * e + e * k);
      s.col(c * d + r) = Eigen::Map<const Vector>(y.data(), d * d);
    }
  return s;
}

}  // namespace rpsse
