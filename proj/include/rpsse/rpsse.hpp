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

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"
#include "rpsse/harness/config.hpp"
#include "rpsse/harness/ensemble.hpp"
#include "rpsse/harness/output.hpp"
#include "rpsse/harness/yields.hpp"
#include "rpsse/noise/process.hpp"
#include "rpsse/noise/rng.hpp"
#include "rpsse/propagate/dense.hpp"
#include "rpsse/propagate/sse.hpp"
#include "rpsse/reference/lindblad.hpp"
#include "rpsse/reference/nz.hpp"
#include "rpsse/reference/relaxation.hpp"
#include "rpsse/reference/sw.hpp"
#include "rpsse/sampling/report.hpp"
#include "rpsse/sampling/sampling.hpp"
#include "rpsse/spin/hamiltonian.hpp"
