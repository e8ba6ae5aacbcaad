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
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rpsse/errors.hpp"
#include "rpsse/spin/hilbert_space.hpp"

namespace rpsse {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class Axis { x = 0, y = 1, z = 2 };

/// Angular momentum matrices for multiplicity n = 2I + 1 in the |I, m> basis
/// ordered m = I, I-1, ..., -I.
inline std::array<Eigen::MatrixXcd, 3> angular_momentum(int multiplicity) {
  const int n = multiplicity;
  const double s = 0.5 * (n - 1);
  Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = s - i;
    z(i, i) = m;
    if (i > 0) plus(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXcd minus = plus.adjoint();
  return {0.5 * (plus + minus), (plus - minus) / cplx(0.0, 2.0), z};
}

/// A linear operator on the composite space, stored as a compressed sparse
/// row matrix assembled from few-body Kronecker terms (never dense D x D).
class SpinOperator {
 public:
  SpinOperator() = default;
  SpinOperator(SparseMatrix m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) { m_.makeCompressed(); }

  static SpinOperator zero(std::size_t dim) {
    SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    return {std::move(m), true};
  }
  static SpinOperator identity(std::size_t dim) {
    SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setIdentity();
    return {std::move(m), true};
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  bool hermitian() const { return hermitian_; }
  const SparseMatrix& matrix() const { return m_; }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  bool empty() const { return m_.nonZeros() == 0; }

  Vector apply(const Vector& x) const { return m_ * x; }
  void apply(const Vector& x, Vector& y) const { y.noalias() = m_ * x; }

  /// <psi|O|psi>; real part only is meaningful when hermitian().
  cplx expectation(const Vector& psi) const { return psi.dot(m_ * psi); }

  DenseMatrix dense(std::size_t guard = 4096) const {
    if (dim() > guard) throw CapacityError("SpinOperator::dense: dimension above guard");
    return DenseMatrix(m_);
  }

  SpinOperator adjoint() const { return {SparseMatrix(m_.adjoint()), hermitian_}; }

  SpinOperator& operator+=(const SpinOperator& o) {
    m_ = (m_ + o.m_).pruned(0.0);
    m_.makeCompressed();
    hermitian_ = hermitian_ && o.hermitian_;
    return *this;
  }
  SpinOperator& operator-=(const SpinOperator& o) {
    m_ = (m_ - o.m_).pruned(0.0);
    m_.makeCompressed();
    hermitian_ = hermitian_ && o.hermitian_;
    return *this;
  }
  friend SpinOperator operator+(SpinOperator a, const SpinOperator& b) { return a += b; }
  friend SpinOperator operator-(SpinOperator a, const SpinOperator& b) { return a -= b; }
  friend SpinOperator operator*(double c, const SpinOperator& a) { return {SparseMatrix(c * a.m_), a.hermitian_}; }
  friend SpinOperator operator*(cplx c, const SpinOperator& a) {
    return {SparseMatrix(c * a.m_), a.hermitian_ && c.imag() == 0.0};
  }
  /// Operator product; Hermitian only if declared so by the caller.
  friend SpinOperator operator*(const SpinOperator& a, const SpinOperator& b) {
    SparseMatrix p = (a.m_ * b.m_).pruned(0.0);
    return {std::move(p), false};
  }

  SpinOperator with_hermitian(bool h) const { return {m_, h}; }

 private:
  SparseMatrix m_;
  bool hermitian_ = true;
};

/// One factor of a Kronecker term: a local matrix acting on a site.
struct LocalFactor {
  std::size_t site;
  Eigen::MatrixXcd op;
};

/// coefficient * (x)_{factors} op_site (x) identity elsewhere, assembled in CSR.
inline SpinOperator kron_term(const HilbertSpace& space, const std::vector<LocalFactor>& factors, cplx coefficient,
                              bool hermitian) {
  const std::size_t dim = space.dim();
  for (const auto& f : factors) {
    if (f.site >= space.site_count()) throw ConfigError("kron_term: unknown site index");
    if (f.op.rows() != space.site_dim(f.site) || f.op.cols() != space.site_dim(f.site)) {
      throw ConfigError("kron_term: local factor has wrong dimension");
    }
  }
  // Nonzero pattern of each local factor by row.
  struct Entry {
    int col;
    cplx value;
  };
  std::vector<std::vector<std::vector<Entry>>> rows(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& op = factors[f].op;
    rows[f].resize(static_cast<std::size_t>(op.rows()));
    for (Eigen::Index r = 0; r < op.rows(); ++r) {
      for (Eigen::Index c = 0; c < op.cols(); ++c) {
        if (op(r, c) != cplx(0.0)) rows[f][static_cast<std::size_t>(r)].push_back({static_cast<int>(c), op(r, c)});
      }
    }
  }
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(dim);
  std::vector<std::pair<std::size_t, cplx>> frontier;
  std::vector<std::pair<std::size_t, cplx>> next;
  for (std::size_t r = 0; r < dim; ++r) {
    frontier.assign(1, {r, coefficient});
    for (std::size_t f = 0; f < factors.size() && !frontier.empty(); ++f) {
      const std::size_t site = factors[f].site;
      const std::size_t stride = space.stride(site);
      const int d = space.digit(r, site);
      next.clear();
      for (const auto& [col, val] : frontier) {
        for (const auto& e : rows[f][static_cast<std::size_t>(d)]) {
          const std::size_t c = col - static_cast<std::size_t>(d) * stride + static_cast<std::size_t>(e.col) * stride;
          next.emplace_back(c, val * e.value);
        }
      }
      frontier.swap(next);
    }
    for (const auto& [col, val] : frontier) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(col), val);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return {std::move(m), hermitian};
}

/// Unitless spin operator of one site along one axis.
inline SpinOperator spin_operator(const HilbertSpace& space, std::size_t site, Axis axis) {
  if (site >= space.site_count()) throw ConfigError("spin_operator: unknown site index");
  const auto mats = angular_momentum(space.site_dim(site));
  return kron_term(space, {{site, mats[static_cast<int>(axis)]}}, 1.0, true);
}

/// sum_{ab} c_ab X_a Y_b for spin vectors on two distinct sites (tensor coupling X.C.Y).
inline SpinOperator tensor_coupling(const HilbertSpace& space, std::size_t site_x, const Eigen::Matrix3d& c,
                                    std::size_t site_y) {
  if (site_x == site_y) throw ConfigError("tensor_coupling: sites must differ");
  const auto mx = angular_momentum(space.site_dim(site_x));
  const auto my = angular_momentum(space.site_dim(site_y));
  SpinOperator total = SpinOperator::zero(space.dim());
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (c(a, b) == 0.0) continue;
      total += kron_term(space, {{site_x, mx[a]}, {site_y, my[b]}}, c(a, b), true);
    }
  }
  return total;
}

/// sum_a v_a S_a on one site.
inline SpinOperator vector_coupling(const HilbertSpace& space, std::size_t site, const Eigen::Vector3d& v) {
  const auto m = angular_momentum(space.site_dim(site));
  Eigen::MatrixXcd local = v[0] * m[0] + v[1] * m[1] + v[2] * m[2];
  return kron_term(space, {{site, local}}, 1.0, true);
}

/// P_S = 1/4 - S1.S2 (x) 1_nuc.
inline SpinOperator singlet_projector(const HilbertSpace& space) {
  SpinOperator p = 0.25 * SpinOperator::identity(space.dim());
  p -= tensor_coupling(space, 0, Eigen::Matrix3d::Identity(), 1);
  return p.with_hermitian(true);
}

/// P_T = 1 - P_S.
inline SpinOperator triplet_projector(const HilbertSpace& space) {
  SpinOperator p = SpinOperator::identity(space.dim()) - singlet_projector(space);
  return p.with_hermitian(true);
}

/// K = (k_S / 2) P_S + (k_T / 2) P_T.
inline SpinOperator haberkorn_operator(const HilbertSpace& space, double k_singlet, double k_triplet) {
  if (!(k_singlet >= 0.0) || !(k_triplet >= 0.0)) throw ConfigError("haberkorn_operator: negative rate");
  SpinOperator k = (0.5 * k_singlet) * singlet_projector(space);
  k += (0.5 * k_triplet) * triplet_projector(space);
  return k.with_hermitian(true);
}

}  // namespace rpsse
