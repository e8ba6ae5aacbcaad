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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rpsse/noise/rng.hpp"
#include "rpsse/propagate/dense.hpp"
#include "rpsse/reference/lindblad.hpp"
#include "rpsse/reference/nz.hpp"
#include "rpsse/reference/sw.hpp"
#include "rpsse/spin/hamiltonian.hpp"
#include "test_util.hpp"

namespace {

using namespace rpsse;
using testutil::Mat;
using Eigen::kroneckerProduct;

Mat random_density(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  const Mat a = testutil::random_hermitian(d, g);
  const Mat r = a * a.adjoint();
  return r / r.trace().real();
}

Mat random_matrix(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  return testutil::random_hermitian(d, g) + cplx(0.0, 1.0) * testutil::random_hermitian(d, g);
}

// Column-major vec superoperator of the Lindblad generator, written out with
// Kronecker products independently of LindbladOperator.
Mat lindblad_superoperator_oracle(const Mat& h, const Mat& k, const std::vector<Mat>& a, const Eigen::MatrixXd& gamma) {
  const auto d = h.rows();
  const Mat id = Mat::Identity(d, d);
  const Mat heff = h - cplx(0.0, 1.0) * k;
  Mat l = cplx(0.0, -1.0) * (Mat(kroneckerProduct(id, heff)) - Mat(kroneckerProduct(Mat(heff.conjugate()), id)));
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t c = 0; c < a.size(); ++c) {
      const double g = gamma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      const Mat ajak = a[j].adjoint() * a[c];
      l += g * (Mat(kroneckerProduct(Mat(a[j].conjugate()), a[c])) - 0.5 * Mat(kroneckerProduct(id, ajak)) -
                0.5 * Mat(kroneckerProduct(Mat(ajak.transpose()), id)));
    }
  return l;
}

Eigen::Map<const Eigen::VectorXcd> vec(const Mat& m) { return {m.data(), m.size()}; }

SpinSystemSpec two_nucleus_spec() {
  SpinSystemSpec spec;
  Eigen::Matrix3d a;
  a << 0.5, 0.1, 0.0, 0.1, -0.3, 0.2, 0.0, 0.2, 1.2;
  spec.radicals[0].nuclei.push_back(Nucleus{"N", 2, a});
  spec.radicals[1].nuclei.push_back(Nucleus{"H", 1, 0.4 * a});
  spec.exchange = 0.1;
  spec.field = {0.0, 0.0, 0.7};
  spec.k_singlet = 0.3;
  spec.k_triplet = 0.05;
  return spec;
}

TEST(Lindblad, ActionMatchesKroneckerOracle) {
  const auto h = assemble_hamiltonian(two_nucleus_spec());
  const auto& space = h.space();
  RelaxationModel model;
  model.terms.push_back(random_field_term(space, 0.4, 0.3));
  // A correlated two-channel term exercises the rate diagonalisation.
  RelaxationTerm t;
  t.channels = {spin_operator(space, 2, Axis::z), spin_operator(space, 0, Axis::x)};
  t.amplitude.resize(2, 2);
  t.amplitude << 0.5, 0.2, 0.2, 0.3;
  t.tau = 0.7;
  model.terms.push_back(t);
  const LindbladOperator op(h.static_part(), h.reaction(), model);

  std::vector<Mat> chans;
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(8, 8);
  for (const auto& c : model.terms[0].channels) chans.emplace_back(c.matrix());
  for (const auto& c : model.terms[1].channels) chans.emplace_back(c.matrix());
  gamma.topLeftCorner(6, 6) = model.terms[0].rates();
  gamma.bottomRightCorner(2, 2) = model.terms[1].rates();
  const Mat oracle = lindblad_superoperator_oracle(Mat(h.static_part().matrix()), Mat(h.reaction().matrix()), chans, gamma);
  const Mat rho = random_matrix(space.dim(), 1);
  const Mat out = op.apply(rho);
  EXPECT_LT((vec(out) - oracle * vec(rho)).norm(), 1e-12 * (oracle * vec(rho)).norm());
}

TEST(Lindblad, TraceLawFromReactionOnly) {
  const auto h = assemble_hamiltonian(two_nucleus_spec());
  RelaxationModel model;
  model.terms.push_back(random_field_term(h.space(), 1.0, 0.5));
  const LindbladOperator op(h.static_part(), h.reaction(), model);
  const Mat rho = random_density(h.dim(), 2);
  const Mat k(h.reaction().matrix());
  EXPECT_NEAR(op.apply(rho).trace().real(), -2.0 * (k * rho).trace().real(), 1e-10);
}

TEST(Lindblad, PurityConservedWithoutDissipation) {
  SpinSystemSpec spec = two_nucleus_spec();
  spec.k_singlet = spec.k_triplet = 0.0;
  const auto h = assemble_hamiltonian(spec);
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(h.dim()));
  psi[5] = 0.6;
  psi[17] = cplx(0.0, 0.8);
  const auto res = lindblad_solve(psi * psi.adjoint(), h.static_part(), h.reaction(), {}, uniform_grid(50.0, 20));
  for (const auto& r : res.rho) EXPECT_NEAR((r * r).trace().real(), 1.0, 1e-10);
}

TEST(Lindblad, SingleSpinLongitudinalDecay) {
  const HilbertSpace space;
  const double k = 0.35;
  RelaxationTerm t;
  for (int a = 0; a < 3; ++a) t.channels.push_back(spin_operator(space, 0, static_cast<Axis>(a)));
  t.tau = 0.01;
  t.amplitude = Eigen::MatrixXd::Identity(3, 3) * (k / (2.0 * t.tau));
  RelaxationModel model{{t}};
  // Electron 1 up, electron 2 unpolarised.
  Mat rho = Mat::Zero(4, 4);
  rho(0, 0) = rho(1, 1) = 0.5;
  const auto sz = spin_operator(space, 0, Axis::z);
  const auto res = lindblad_solve(rho, SpinOperator::zero(4), SpinOperator::zero(4), model, uniform_grid(10.0, 10),
                                  {{"Sz", sz}});
  for (std::size_t i = 0; i < res.time.size(); ++i) {
    EXPECT_NEAR(res.values[0][i], 0.5 * std::exp(-k * res.time[i]), 1e-10);
  }
}

TEST(Lindblad, MatchesDenseSuperoperatorExponential) {
  SpinSystemSpec spec;
  spec.radicals[0].nuclei.push_back(Nucleus{"H", 1, Eigen::Matrix3d(Eigen::Vector3d(0.3, 0.5, 1.4).asDiagonal())});
  spec.field = {0.2, 0, 0.5};
  spec.k_singlet = 0.2;
  spec.k_triplet = 0.02;
  const auto h = assemble_hamiltonian(spec);
  RelaxationModel model;
  model.terms.push_back(random_field_term_from_rate(h.space(), 0.05, 0.1));
  std::vector<Mat> chans;
  for (const auto& c : model.terms[0].channels) chans.emplace_back(c.matrix());
  const Mat oracle = lindblad_superoperator_oracle(Mat(h.static_part().matrix()), Mat(h.reaction().matrix()), chans,
                                                   model.terms[0].rates());
  const Mat rho0 = random_density(8, 3);
  const auto res = lindblad_solve(rho0, h.static_part(), h.reaction(), model, uniform_grid(40.0, 8));
  for (std::size_t i = 0; i < res.time.size(); ++i) {
    const Eigen::VectorXcd expect = testutil::taylor_expm(oracle * res.time[i]) * vec(rho0);
    EXPECT_LT((vec(res.rho[i]) - expect).norm(), 1e-9);
  }
}

TEST(Lindblad, EqualsDenseHaberkornWithoutRelaxation) {
  const auto h = assemble_hamiltonian(two_nucleus_spec());
  Schedule sch;
  sch.dt = 0.5;
  sch.horizon = 20.0;
  sch.substeps = 1;
  FrozenPath none(0, [](double, std::span<double>) {});
  const Mat rho0 = random_density(h.dim(), 4);
  const auto dense = dense_propagate_density(rho0, h, none, sch);
  LindbladOptions opts;
  opts.krylov.tol = 1e-13;
  const auto lb = lindblad_solve(rho0, h.static_part(), h.reaction(), {}, dense.time, {}, opts);
  for (std::size_t i = 0; i < dense.time.size(); ++i) EXPECT_LT((lb.rho[i] - dense.rho[i]).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lindblad, PositivityAlongRandomFieldTrajectory) {
  const auto h = assemble_hamiltonian(two_nucleus_spec());
  RelaxationModel model;
  model.terms.push_back(random_field_term_from_rate(h.space(), 0.1, 0.05));
  Vector s = Vector::Zero(static_cast<Eigen::Index>(h.dim()));
  s[6] = 1.0 / std::sqrt(2.0);
  s[12] = -1.0 / std::sqrt(2.0);
  LindbladOptions opts;
  opts.track_min_eigenvalue = true;
  const auto res = lindblad_solve(s * s.adjoint(), h.static_part(), h.reaction(), model, uniform_grid(30.0, 30), {}, opts);
  for (double e : res.min_eigenvalue) EXPECT_GE(e, -1e-8);
}

TEST(Lindblad, RejectsNegativeRates) {
  const HilbertSpace space;
  RelaxationTerm t;
  t.channels = {spin_operator(space, 0, Axis::z)};
  t.amplitude = Eigen::MatrixXd::Constant(1, 1, -1.0);
  EXPECT_THROW(LindbladOperator(SpinOperator::zero(4), SpinOperator::zero(4), RelaxationModel{{t}}), ConfigError);
}

TEST(Nz, ZeroKernelGivesZero) {
  const auto h = assemble_hamiltonian(two_nucleus_spec());
  RelaxationModel model;
  model.terms.push_back(random_field_term(h.space(), 0.0, 1.0));
  const auto nz = nz_superoperator(h.static_part(), h.reaction(), model, {0.1, 20.0, 1e-8});
  EXPECT_EQ(nz.apply(random_matrix(h.dim(), 5)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Nz, ExtremeNarrowingEqualsLindblad) {
  SpinSystemSpec spec;
  spec.exchange = 0.3;
  spec.field = {0.1, 0.0, 1.0};
  spec.k_singlet = 0.2;
  const auto h = assemble_hamiltonian(spec);
  const double tau = 1e-8, j0 = 0.05;
  RelaxationModel model;
  model.terms.push_back(random_field_term(h.space(), 0.0, tau));
  model.terms[0].amplitude = Eigen::MatrixXd::Identity(6, 6) * (j0 / tau);
  model.terms[0].amplitude(0, 3) = model.terms[0].amplitude(3, 0) = 0.5 * j0 / tau;
  const auto nz = nz_superoperator(h.static_part(), SpinOperator::zero(4), model, {tau / 1000.0, 20.0 * tau, 1e-8});
  const LindbladOperator dissipator(SpinOperator::zero(4), SpinOperator::zero(4), model);
  const Mat rho = random_density(4, 6);
  const Mat a = nz.apply(rho), b = dissipator.apply(rho);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-6 * b.cwiseAbs().maxCoeff());
}

TEST(Nz, DenseMatrixMatchesAction) {
  const HilbertSpace space;
  std::mt19937_64 g(7);
  const Mat h0 = testutil::random_hermitian(4, g) * 0.3;
  const Mat k = Mat(haberkorn_operator(space, 0.4, 0.1).matrix());
  RelaxationModel model;
  model.terms.push_back(random_field_term(space, 0.5, 0.8));
  model.terms.push_back(two_site_term(space, 0.7, 0.3));
  const NzSuperoperator nz(h0, k, model, {0.01, 20.0, 1e-8});
  const Mat rho = random_matrix(4, 8);
  EXPECT_LT((nz.matrix() * vec(rho) - vec(nz.apply(rho))).norm(), 1e-12 * vec(nz.apply(rho)).norm());
}

TEST(Nz, SingleSpinRatesMatchLindblad) {
  const HilbertSpace space;
  const double k_rf = 0.2, tau = 0.5;
  RelaxationModel model;
  model.terms.push_back(random_field_term_from_rate(space, k_rf, tau));
  const auto nz = nz_superoperator(SpinOperator::zero(4), SpinOperator::zero(4), model, {0.005, 12.0, 1e-8});
  const Mat sz(spin_operator(space, 0, Axis::z).matrix());
  const Mat sx(spin_operator(space, 1, Axis::x).matrix());
  // Each spin's polarisation relaxes at k_RF, as in the Lindblad solver.
  EXPECT_LT((nz.apply(sz) + k_rf * sz).cwiseAbs().maxCoeff(), 1e-4 * k_rf);
  EXPECT_LT((nz.apply(sx) + k_rf * sx).cwiseAbs().maxCoeff(), 1e-4 * k_rf);
  const LindbladOperator lb(SpinOperator::zero(4), SpinOperator::zero(4), model);
  EXPECT_LT((nz.apply(sz) - lb.apply(sz)).cwiseAbs().maxCoeff(), 1e-4 * k_rf);
}

TEST(Nz, StaticDisorderKernelIsRejected) {
  const HilbertSpace space;
  RelaxationModel model;
  model.terms.push_back(random_field_term(space, 0.5, std::numeric_limits<double>::infinity()));
  EXPECT_THROW(nz_superoperator(SpinOperator::zero(4), SpinOperator::zero(4), model, {0.01, 10.0, 1e-8}), NumericError);
  EXPECT_THROW(nz_superoperator(SpinOperator::zero(4), SpinOperator::zero(4),
                                RelaxationModel{{random_field_term(space, 0.5, 5.0)}}, {0.01, 10.0, 1e-8}),
               NumericError);
}

TEST(SchultenWolynes, VectorLengthsAndMoments) {
  SpinSystemSpec spec;
  spec.radicals[0].nuclei.push_back(Nucleus{"H", 1, Eigen::Matrix3d::Zero()});
  spec.radicals[1].nuclei.push_back(Nucleus{"N", 2, Eigen::Matrix3d::Zero()});
  Philox rng(9);
  std::vector<double> x, z2;
  for (int k = 0; k < 100000; ++k) {
    const auto set = sw_sample(spec, rng);
    ASSERT_NEAR(set.vectors[0].norm(), std::sqrt(3.0) / 2.0, 1e-12);
    ASSERT_NEAR(set.vectors[1].norm(), std::sqrt(2.0), 1e-12);
    x.push_back(set.vectors[1].x());
    z2.push_back(set.vectors[1].z() * set.vectors[1].z());
  }
  const auto mx = testutil::mean_se(x), mz = testutil::mean_se(z2);
  EXPECT_LT(std::abs(mx.mean), 4 * mx.se);
  EXPECT_LT(std::abs(mz.mean - 2.0 / 3.0), 4 * mz.se);
}

TEST(SchultenWolynes, NoNucleiEqualsExactDynamics) {
  SpinSystemSpec spec;
  spec.exchange = 0.2;
  spec.field = {0.0, 0.3, 1.0};
  spec.radicals[1].g(2, 2) += 0.01;
  spec.k_singlet = 0.1;
  spec.k_triplet = 0.02;
  const auto h = assemble_hamiltonian(spec);
  const auto grid = uniform_grid(30.0, 30);
  const auto sw = sw_propagate(spec, {SWVectorSet{}}, nullptr, grid);
  Vector s = Vector::Zero(4);
  s[1] = 1.0 / std::sqrt(2.0);
  s[2] = -1.0 / std::sqrt(2.0);
  const auto lb = lindblad_solve(s * s.adjoint(), h.static_part(), h.reaction(), {}, grid,
                                 {{"survival", SpinOperator::identity(4)}, {"singlet", singlet_projector(h.space())}});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(sw.survival[i], lb.values[0][i], 1e-10);
    EXPECT_NEAR(sw.singlet[i], lb.values[1][i], 1e-10);
  }
}

TEST(SchultenWolynes, ConservedSingletWithoutInteractions) {
  SpinSystemSpec spec;
  spec.radicals[0].nuclei.push_back(Nucleus{"H", 1, Eigen::Matrix3d::Zero()});
  Philox rng(10);
  std::vector<SWVectorSet> samples;
  for (int k = 0; k < 10; ++k) samples.push_back(sw_sample(spec, rng));
  const auto sw = sw_propagate(spec, samples, nullptr, uniform_grid(100.0, 10));
  for (double p : sw.singlet) EXPECT_NEAR(p, 1.0, 1e-12);
}

TEST(SchultenWolynes, NzExtremeNarrowingMatchesLindblad) {
  SpinSystemSpec spec;
  spec.exchange = 0.1;
  spec.field = {0.0, 0.0, 0.5};
  spec.k_singlet = 0.05;
  spec.k_triplet = 0.01;
  const HilbertSpace space;
  RelaxationModel model;
  model.terms.push_back(random_field_term_from_rate(space, 0.02, 0.001));
  const auto grid = uniform_grid(60.0, 12);
  const auto sw = sw_propagate(spec, {SWVectorSet{}}, &model, grid);
  const auto h = assemble_hamiltonian(spec);
  Vector s = Vector::Zero(4);
  s[1] = 1.0 / std::sqrt(2.0);
  s[2] = -1.0 / std::sqrt(2.0);
  const auto lb = lindblad_solve(s * s.adjoint(), h.static_part(), h.reaction(), model, grid,
                                 {{"singlet", singlet_projector(h.space())}});
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(sw.singlet[i], lb.values[0][i], 1e-4);
}

}  // namespace
