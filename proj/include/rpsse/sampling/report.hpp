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
#include <cstdint>
#include <vector>

#include "rpsse/noise/process.hpp"
#include "rpsse/noise/rng.hpp"
#include "rpsse/propagate/generator.hpp"
#include "rpsse/propagate/sse.hpp"
#include "rpsse/sampling/sampling.hpp"

namespace rpsse {

/// Runs trajectory i of an ensemble: nuclear draw from stream (seed, i,
/// nuclear_state), noise from (seed, i, noise_path). Holds one worker's
/// propagator, so use one instance per thread.
class TrajectoryRunner {
 public:
  TrajectoryRunner(const FluctuatingHamiltonian& h, const GeneratorAssembler& assembler, const NoiseProcess& noise,
                   SamplingScheme scheme, const Schedule& schedule, std::uint64_t seed)
      : h_(h), noise_(noise), scheme_(scheme), seed_(seed), prop_(h, assembler, schedule) {}

  TrajectoryRecord run(std::uint64_t index, const std::vector<Observable>& observables) {
    Philox nuc_rng(seed_, index, StreamTag::nuclear_state);
    const auto nuclear = draw_nuclear_state(scheme_, h_.space(), nuc_rng);
    Philox noise_rng(seed_, index, StreamTag::noise_path);
    LiveNoise<Philox> source(h_, noise_, noise_rng);
    return prop_.run(initial_pair_state(h_.space(), nuclear), source, observables);
  }

  /// Trajectory i from a given initial state; only the noise stream is drawn.
  TrajectoryRecord run(std::uint64_t index, const Vector& psi0, const std::vector<Observable>& observables) {
    Philox noise_rng(seed_, index, StreamTag::noise_path);
    LiveNoise<Philox> source(h_, noise_, noise_rng);
    return prop_.run(SpinState{psi0, 0.0}, source, observables);
  }

 private:
  const FluctuatingHamiltonian& h_;
  const NoiseProcess& noise_;
  SamplingScheme scheme_;
  std::uint64_t seed_;
  SsePropagator prop_;
};

/// Value of series o at grid point t, zero beyond an early stop.
inline double value_or_zero(const TrajectoryRecord& rec, std::size_t o, std::size_t t) {
  return t < rec.values[o].size() ? rec.values[o][t] : 0.0;
}

struct SchemeVarianceReport {
  SamplingScheme scheme = SamplingScheme::suz;
  std::size_t samples = 0;
  std::vector<double> time;
  std::vector<std::vector<double>> sem;   // [replicate][t]
  std::vector<std::vector<double>> mean;  // [replicate][t]
  std::vector<double> median_sem;         // [t]
};

/// SEM(t) of one observable for `replicates` independent M-sample experiments.
inline SchemeVarianceReport scheme_variance_report(const FluctuatingHamiltonian& h, const NoiseProcess& noise,
                                                   SamplingScheme scheme, const Observable& observable,
                                                   Schedule schedule, std::size_t samples, std::size_t replicates,
                                                   std::uint64_t seed) {
  if (samples < 2 || replicates < 1) throw ConfigError("scheme_variance_report: need M >= 2 and replicates >= 1");
  schedule.survival_threshold = 0.0;
  GeneratorAssembler assembler(h);
  TrajectoryRunner runner(h, assembler, noise, scheme, schedule, seed);
  const std::vector<Observable> obs{observable};
  SchemeVarianceReport rep;
  rep.scheme = scheme;
  rep.samples = samples;
  for (std::size_t r = 0; r < replicates; ++r) {
    std::vector<TraceEstimate> acc;
    for (std::size_t m = 0; m < samples; ++m) {
      const auto rec = runner.run(r * samples + m, obs);
      if (rep.time.empty()) rep.time = rec.time;
      if (acc.empty()) acc.resize(rep.time.size());
      for (std::size_t t = 0; t < acc.size(); ++t) acc[t].add(value_or_zero(rec, 0, t));
    }
    std::vector<double> sem(acc.size()), mean(acc.size());
    for (std::size_t t = 0; t < acc.size(); ++t) {
      sem[t] = acc[t].sem();
      mean[t] = acc[t].mean;
    }
    rep.sem.push_back(std::move(sem));
    rep.mean.push_back(std::move(mean));
  }
  rep.median_sem.resize(rep.time.size());
  for (std::size_t t = 0; t < rep.time.size(); ++t) {
    std::vector<double> col;
    for (const auto& s : rep.sem) col.push_back(s[t]);
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    rep.median_sem[t] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return rep;
}

}  // namespace rpsse
