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

// Test-only oracles: explicit dense Kronecker products and helpers that do not
// share code with the library's operator assembly.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace testutil {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Spin matrices written out by hand for I = 1/2 and I = 1.
inline std::array<Mat, 3> hand_spin(int multiplicity) {
  const cplx i(0.0, 1.0);
  if (multiplicity == 2) {
    Mat x(2, 2), y(2, 2), z(2, 2);
    x << 0, 0.5, 0.5, 0;
    y << 0, -0.5 * i, 0.5 * i, 0;
    z << 0.5, 0, 0, -0.5;
    return {x, y, z};
  }
  if (multiplicity == 3) {
    const double r = 1.0 / std::sqrt(2.0);
    Mat x(3, 3), y(3, 3), z(3, 3);
    x << 0, r, 0, r, 0, r, 0, r, 0;
    y << 0, -i * r, 0, i * r, 0, -i * r, 0, i * r, 0;
    z << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return {x, y, z};
  }
  throw std::invalid_argument("hand_spin: only multiplicities 2 and 3");
}

/// Embeds a local operator on `site` of a space with the given site dimensions.
inline Mat embed(const std::vector<int>& dims, std::size_t site, const Mat& op) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t s = 0; s < dims.size(); ++s) {
    const Mat f = s == site ? op : Mat::Identity(dims[s], dims[s]);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

inline Eigen::VectorXcd random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = cplx(nd(rng), nd(rng));
  return v;
}

inline Mat random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = cplx(nd(rng), nd(rng));
  return 0.5 * (a + a.adjoint());
}

/// Matrix exponential by scaling and squaring of a long Taylor series; slow
/// but independent of Eigen's Pade-based MatrixFunctions module.
inline Mat taylor_expm(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.125) {
    scaled *= 0.5;
    ++squarings;
  }
  const Mat b = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (term * b / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

/// Mean and standard error of a sample.
struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(x.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(x.size()))};
}

}  // namespace testutil
