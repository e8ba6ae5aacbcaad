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
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rpsse/errors.hpp"
#include "rpsse/spin/system.hpp"

namespace rpsse {

/// Default ceiling on D = 4Z (complex vectors of 2^24 entries are 256 MiB).
inline constexpr std::size_t kDefaultDimensionBudget = std::size_t{1} << 24;

/// Composite Hilbert space: electron 1 (x) electron 2 (x) nuclei in declaration
/// order (radical 1's nuclei, then radical 2's). Site 0 is electron 1, site 1 is
/// electron 2, site 2 + k is nucleus k. Within a site, basis states run from
/// m = +I down to m = -I. The first site is the most significant index digit.
class HilbertSpace {
 public:
  HilbertSpace() : HilbertSpace(std::vector<int>{}) {}

  explicit HilbertSpace(std::vector<int> nuclear_multiplicities, std::vector<int> nuclear_radical = {})
      : radical_of_(std::move(nuclear_radical)) {
    dims_ = {2, 2};
    for (int m : nuclear_multiplicities) {
      if (m < 2) throw ConfigError("nuclear multiplicity must be >= 2");
      dims_.push_back(m);
    }
    if (radical_of_.empty()) radical_of_.assign(nuclear_multiplicities.size(), 0);
    strides_.assign(dims_.size(), 1);
    for (std::size_t s = dims_.size(); s-- > 1;) strides_[s - 1] = strides_[s] * dims_[s];
    nuclear_dim_ = 1;
    for (std::size_t s = 2; s < dims_.size(); ++s) nuclear_dim_ *= static_cast<std::size_t>(dims_[s]);
  }

  std::size_t nuclear_dim() const { return nuclear_dim_; }           // Z
  std::size_t dim() const { return 4 * nuclear_dim_; }                // D
  std::size_t site_count() const { return dims_.size(); }
  std::size_t nucleus_count() const { return dims_.size() - 2; }
  int site_dim(std::size_t site) const { return dims_.at(site); }
  std::size_t stride(std::size_t site) const { return strides_.at(site); }
  const std::vector<int>& site_dims() const { return dims_; }

  /// Radical (0 or 1) carrying nucleus k.
  int radical_of(std::size_t nucleus) const { return radical_of_.at(nucleus); }

  static constexpr std::size_t electron_site(int radical) { return static_cast<std::size_t>(radical); }
  static constexpr std::size_t nucleus_site(std::size_t k) { return 2 + k; }

  /// Basis index from per-site digits (digit 0 means m = +I).
  std::size_t index(const std::vector<int>& digits) const {
    std::size_t i = 0;
    for (std::size_t s = 0; s < dims_.size(); ++s) i += strides_[s] * static_cast<std::size_t>(digits.at(s));
    return i;
  }

  int digit(std::size_t index, std::size_t site) const {
    return static_cast<int>((index / strides_[site]) % static_cast<std::size_t>(dims_[site]));
  }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<int> radical_of_;
  std::size_t nuclear_dim_ = 1;
};

/// Builds the Hilbert space for a spec, rejecting D above the budget.
inline HilbertSpace build_space(const SpinSystemSpec& spec, std::size_t budget = kDefaultDimensionBudget) {
  spec.validate();
  std::vector<int> mult;
  std::vector<int> owner;
  double dim = 4.0;
  for (int r = 0; r < 2; ++r) {
    for (const auto& n : spec.radicals[r].nuclei) {
      mult.push_back(n.multiplicity());
      owner.push_back(r);
      dim *= n.multiplicity();
    }
  }
  if (dim > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "Hilbert space dimension " << dim << " exceeds budget " << budget;
    throw CapacityError(msg.str());
  }
  return HilbertSpace(std::move(mult), std::move(owner));
}

}  // namespace rpsse
