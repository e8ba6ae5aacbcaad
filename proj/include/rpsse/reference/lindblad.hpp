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
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpsse/errors.hpp"
#include "rpsse/propagate/arnoldi.hpp"
#include "rpsse/propagate/sse.hpp"
#include "rpsse/reference/relaxation.hpp"
#include "rpsse/spin/operator.hpp"

namespace rpsse {

inline constexpr std::size_t kLindbladDimensionLimit = 4096;

/// Row-major density matrix: sparse * row-major dense products vectorise well.
using RowDensity = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Matrix-free Liouvillian
///   L rho = -i (Heff rho - rho Heff^dagger) + sum_m lambda_m L_m rho L_m^dagger,
/// with Heff = H0 - i K - (i/2) sum_jk gamma_jk A_j A_k and gamma diagonalised
/// into Hermitian jump operators L_m = sum_k U_km A_k.
class LindbladOperator {
 public:
  LindbladOperator(const SpinOperator& h0, const SpinOperator& k, const RelaxationModel& model = {}) {
    const std::size_t d = h0.dim();
    if (k.dim() != d) throw ConfigError("lindblad: H0 and K dimensions differ");
    if (d > kLindbladDimensionLimit) throw CapacityError("lindblad: dimension exceeds 4096");
    model.validate(d);
    SparseMatrix heff = h0.matrix() - cplx(0.0, 1.0) * k.matrix();
    for (const auto& term : model.terms) {
      const Eigen::MatrixXd gamma = term.rates();
      if (gamma.size() == 0) continue;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
      for (Eigen::Index m = 0; m < gamma.rows(); ++m) {
        const double lambda = es.eigenvalues()[m];
        if (lambda < -1e-12 * std::max(1.0, gamma.norm())) throw ConfigError("lindblad: negative rate");
        if (lambda <= 0.0) continue;
        SparseMatrix l(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t c = 0; c < term.channels.size(); ++c) {
          const double u = es.eigenvectors()(static_cast<Eigen::Index>(c), m);
          if (u != 0.0) l += u * term.channels[c].matrix();
        }
        l.prune(cplx(0.0));
        SparseMatrix ll = l * l;
        heff -= cplx(0.0, 0.5 * lambda) * ll;
        jumps_.push_back({lambda, l, SparseMatrix(l.conjugate())});
      }
    }
    heff.makeCompressed();
    heff_ = heff;
    heff_conj_ = SparseMatrix(heff_.conjugate());
    dim_ = d;
  }

  std::size_t dim() const { return dim_; }

  // Right products X B are formed as (conj(B^dagger) X^T)^T so every product is sparse * dense.
  void apply(const RowDensity& rho, RowDensity& out) const {
    out.noalias() = heff_ * rho;
    tmp_ = rho.transpose();
    tmp2_.noalias() = heff_conj_ * tmp_;
    out -= tmp2_.transpose();
    out *= cplx(0.0, -1.0);
    for (const auto& j : jumps_) {
      tmp_.noalias() = j.op * rho;
      tmp2_ = tmp_.transpose();
      tmp_.noalias() = j.conj * tmp2_;
      out += j.rate * tmp_.transpose();
    }
  }

  DenseMatrix apply(const DenseMatrix& rho) const {
    RowDensity out;
    apply(RowDensity(rho), out);
    return out;
  }

 private:
  struct Jump {
    double rate;
    SparseMatrix op;
    SparseMatrix conj;  // conj(L) = (L^dagger)^T
  };
  SparseMatrix heff_;
  SparseMatrix heff_conj_;  // (Heff^dagger)^T
  std::vector<Jump> jumps_;
  std::size_t dim_ = 0;
  mutable RowDensity tmp_;
  mutable RowDensity tmp2_;
};

struct LindbladOptions {
  KrylovOptions krylov{32, 1e-10};
  bool keep_density = true;
  bool track_min_eigenvalue = false;
};

struct LindbladResult {
  std::vector<double> time;
  std::vector<DenseMatrix> rho;                 // when keep_density
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;      // [observable][t], tr(O rho)
  std::vector<double> min_eigenvalue;           // when track_min_eigenvalue
  std::size_t krylov_steps = 0;
};

inline double min_eigenvalue(const DenseMatrix& rho) {
  const DenseMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Integrates d rho/dt = L rho from times.front() through the given grid with
/// Liouville-space Arnoldi steps; each output interval is split adaptively
/// until the Krylov error estimate meets the tolerance.
inline LindbladResult lindblad_solve(const DenseMatrix& rho0, const LindbladOperator& op,
                                     const std::vector<double>& times, const std::vector<Observable>& observables = {},
                                     const LindbladOptions& opts = {}) {
  const auto d = static_cast<Eigen::Index>(op.dim());
  if (rho0.rows() != d || rho0.cols() != d) throw ConfigError("lindblad_solve: density matrix has wrong shape");
  if (times.empty()) throw ConfigError("lindblad_solve: empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ConfigError("lindblad_solve: time grid must be strictly increasing");
  }
  std::vector<DenseMatrix> obs;
  LindbladResult res;
  for (const auto& o : observables) {
    if (static_cast<Eigen::Index>(o.op.dim()) != d) throw ConfigError("lindblad_solve: observable has wrong dimension");
    obs.emplace_back(o.op.matrix());
    res.names.push_back(o.name);
  }
  res.values.resize(obs.size());
  auto record = [&](double t, const RowDensity& rho) {
    res.time.push_back(t);
    if (opts.keep_density) res.rho.push_back(rho);
    for (std::size_t o = 0; o < obs.size(); ++o) {
      // tr(O rho) = sum_ab O_ba rho_ab
      res.values[o].push_back((obs[o].transpose().array() * rho.array()).sum().real());
    }
    if (opts.track_min_eigenvalue) res.min_eigenvalue.push_back(min_eigenvalue(rho));
  };

  ArnoldiExp<RowDensity> krylov(opts.krylov);
  auto apply = [&](const RowDensity& x, RowDensity& y) { op.apply(x, y); };
  RowDensity rho = rho0;
  record(times.front(), rho);
  double h_nom = times.size() > 1 ? times[1] - times[0] : 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double t = times[i - 1];
    const double end = times[i];
    while (t < end) {
      double h = std::min(h_nom, end - t);
      if (end - t - h < 1e-12 * (end - times[i - 1])) h = end - t;
      KrylovStats st;
      if (krylov.try_step(apply, rho, h, &st)) {
        t = (h == end - t) ? end : t + h;
        ++res.krylov_steps;
        // Grow only when the step converged well inside the Krylov budget.
        if (h >= h_nom && st.dim <= (3 * opts.krylov.max_dim) / 4) h_nom *= 1.5;
      } else {
        h_nom = 0.5 * h;
        if (h_nom < 1e-9 * std::max(1.0, std::abs(end))) throw StepSizeError("lindblad_solve: step size underflow");
      }
    }
    if (!rho.allFinite()) throw NumericError("lindblad_solve: non-finite density matrix");
    record(end, rho);
  }
  return res;
}

inline LindbladResult lindblad_solve(const DenseMatrix& rho0, const SpinOperator& h0, const SpinOperator& k,
                                     const RelaxationModel& model, const std::vector<double>& times,
                                     const std::vector<Observable>& observables = {},
                                     const LindbladOptions& opts = {}) {
  return lindblad_solve(rho0, LindbladOperator(h0, k, model), times, observables, opts);
}

/// Uniform grid t0, t0 + dt, ..., t_end.
inline std::vector<double> uniform_grid(double t_end, std::size_t intervals) {
  if (intervals == 0 || !(t_end > 0.0)) throw ConfigError("uniform_grid: need t_end > 0 and intervals >= 1");
  std::vector<double> g(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = t_end * static_cast<double>(i) / static_cast<double>(intervals);
  return g;
}

}  // namespace rpsse
