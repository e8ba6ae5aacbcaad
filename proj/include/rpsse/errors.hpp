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

#include <stdexcept>
#include <string>

namespace rpsse {

/// Invalid input: malformed spec, config or arguments.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested Hilbert space or dense solve exceeds the configured budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numerical failure during propagation (non-finite values, Krylov non-convergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Krylov propagator did not converge at its maximum subspace dimension.
class StepSizeError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace rpsse
