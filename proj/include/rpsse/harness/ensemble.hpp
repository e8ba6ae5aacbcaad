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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rpsse/harness/config.hpp"
#include "rpsse/sampling/report.hpp"
#include "rpsse/sampling/sampling.hpp"

namespace rpsse {

struct EnsembleOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Trajectories per reduction block. Part of the result's identity: the
  /// output depends on it, never on the thread count.
  std::size_t block = 16;
  /// First trajectory index; lets independent ensembles share a seed.
  std::uint64_t index_offset = 0;
  /// Overrides the sampled initial pair state, e.g. for coherence studies.
  std::function<Vector(std::uint64_t index)> initial_state;
  /// Called with (finished, total) after each block commits.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct EnsembleEstimate {
  std::vector<double> time;
  std::vector<std::string> names;
  std::vector<std::vector<double>> mean;  // [observable][t]
  std::vector<std::vector<double>> sem;   // [observable][t]
  /// Per-trajectory trapezoid integrals of the unscaled observables, ns.
  std::vector<double> integral_mean;
  std::vector<double> integral_sem;
  std::size_t samples = 0;
  std::size_t early_stops = 0;
  std::uint64_t seed = 0;
  std::uint64_t index_offset = 0;
  SamplingScheme scheme = SamplingScheme::suz;
  double k_free = 0.0;
  bool rescaled = true;
  double survival_threshold = 0.0;
  std::string run_id;

  std::size_t index(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("ensemble has no observable '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  }
  bool has(const std::string& name) const { return std::find(names.begin(), names.end(), name) != names.end(); }

  /// Mean of observable o at grid point t without the e^{kf t} rescaling.
  double unscaled(std::size_t o, std::size_t t) const {
    return rescaled ? mean[o][t] * std::exp(-k_free * time[t]) : mean[o][t];
  }
};

/// Recording grid of a schedule: t = 0, every stride-th step and the last step.
inline std::vector<double> record_grid(const Schedule& s) {
  std::vector<double> t{0.0};
  const std::size_t steps = s.step_count();
  for (std::size_t n = 1; n <= steps; ++n) {
    if (n % static_cast<std::size_t>(s.record_stride) == 0 || n == steps) t.push_back(0.0 + n * s.dt);
  }
  return t;
}

namespace detail {

struct BlockAccumulator {
  std::vector<TraceEstimate> series;     // [o * T + t]
  std::vector<TraceEstimate> integrals;  // [o]
  std::size_t early_stops = 0;

  BlockAccumulator(std::size_t obs, std::size_t points) : series(obs * points), integrals(obs) {}

  void merge(const BlockAccumulator& b) {
    for (std::size_t i = 0; i < series.size(); ++i) series[i].merge(b.series[i]);
    for (std::size_t i = 0; i < integrals.size(); ++i) integrals[i].merge(b.integrals[i]);
    early_stops += b.early_stops;
  }
};

inline std::string hex_id(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(12, '0');
  for (int i = 11; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 15];
  return s;
}

/// FNV-1a over the resolved config and seed.
inline std::string run_id(const std::string& text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (char c : text) mix(static_cast<unsigned char>(c));
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  return hex_id(h);
}

}  // namespace detail

/// Runs M trajectories and reduces them to mean and SEM series.
///
/// Trajectory i draws its nuclear state and noise from streams keyed by
/// (seed, index_offset + i). Trajectories are grouped into fixed blocks; each
/// block is reduced in index order and blocks are merged in block order, so
/// the output is bit-identical for any thread count. A trajectory that stops
/// below the survival threshold contributes zero beyond its last record.
inline EnsembleEstimate run_ensemble(const FluctuatingHamiltonian& h, const NoiseModelSpec& noise_spec,
                                     SamplingScheme scheme, const Schedule& schedule, std::size_t samples,
                                     std::uint64_t seed, const std::vector<Observable>& observables,
                                     const EnsembleOptions& opts = {}) {
  if (samples < 1) throw ConfigError("run_ensemble: need at least one sample");
  if (opts.block < 1) throw ConfigError("run_ensemble: block size must be >= 1");
  if (observables.empty()) throw ConfigError("run_ensemble: no observables requested");
  schedule.validate();

  const NoiseProcess noise(noise_spec);
  const GeneratorAssembler assembler(h);
  const auto grid = record_grid(schedule);
  const std::size_t points = grid.size();
  const std::size_t n_obs = observables.size();

  // Positions of the survival / singlet / triplet series for the pointwise identity check.
  auto find = [&](const char* name) -> long {
    for (std::size_t o = 0; o < n_obs; ++o) {
      if (observables[o].name == name) return static_cast<long>(o);
    }
    return -1;
  };
  const long i_one = find("survival"), i_s = find("singlet"), i_t = find("triplet");
  const bool check_identity = i_one >= 0 && i_s >= 0 && i_t >= 0;

  const std::size_t blocks = (samples + opts.block - 1) / opts.block;
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));

  detail::BlockAccumulator total(n_obs, points);
  std::map<std::size_t, detail::BlockAccumulator> pending;
  std::size_t next_commit = 0;
  std::atomic<std::size_t> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    try {
      TrajectoryRunner runner(h, assembler, noise, scheme, schedule, seed);
      std::vector<double> unscale(points);
      for (std::size_t t = 0; t < points; ++t) {
        unscale[t] = schedule.rescaled ? std::exp(-schedule.k_free * grid[t]) : 1.0;
      }
      while (!failed.load()) {
        const std::size_t b = next_block.fetch_add(1);
        if (b >= blocks) break;
        detail::BlockAccumulator acc(n_obs, points);
        const std::size_t lo = b * opts.block, hi = std::min(samples, lo + opts.block);
        for (std::size_t i = lo; i < hi && !failed.load(); ++i) {
          const std::uint64_t index = opts.index_offset + i;
          TrajectoryRecord rec;
          try {
            rec = opts.initial_state ? runner.run(index, opts.initial_state(index), observables)
                                     : runner.run(index, observables);
            if (rec.time.size() > points) throw NumericError("trajectory recorded more points than its schedule");
            if (check_identity) {
              for (std::size_t t = 0; t < rec.time.size(); ++t) {
                const double one = rec.values[static_cast<std::size_t>(i_one)][t];
                const double sum = rec.values[static_cast<std::size_t>(i_s)][t] +
                                   rec.values[static_cast<std::size_t>(i_t)][t];
                if (std::abs(one - sum) > 1e-10 * std::max(1.0, std::abs(one))) {
                  throw NumericError("survival differs from singlet + triplet at t = " + std::to_string(grid[t]));
                }
              }
            }
          } catch (const std::exception& e) {
            const std::string where = " [trajectory " + std::to_string(index) + ", seed " + std::to_string(seed) + "]";
            if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(e.what() + where);
            throw NumericError(e.what() + where);
          }
          if (rec.stopped_early) ++acc.early_stops;
          for (std::size_t o = 0; o < n_obs; ++o) {
            double integral = 0.0;
            double prev = 0.0;
            for (std::size_t t = 0; t < points; ++t) {
              const double v = value_or_zero(rec, o, t);
              acc.series[o * points + t].add(v);
              const double u = v * unscale[t];
              if (t > 0) integral += 0.5 * (grid[t] - grid[t - 1]) * (prev + u);
              prev = u;
            }
            acc.integrals[o].add(integral);
          }
        }
        std::lock_guard<std::mutex> lock(mu);
        pending.emplace(b, std::move(acc));
        while (!pending.empty() && pending.begin()->first == next_commit) {
          total.merge(pending.begin()->second);
          pending.erase(pending.begin());
          ++next_commit;
          if (opts.progress) opts.progress(std::min(samples, next_commit * opts.block), samples);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
      failed.store(true);
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  EnsembleEstimate est;
  est.time = grid;
  for (const auto& o : observables) est.names.push_back(o.name);
  est.mean.assign(n_obs, std::vector<double>(points));
  est.sem.assign(n_obs, std::vector<double>(points));
  est.integral_mean.resize(n_obs);
  est.integral_sem.resize(n_obs);
  for (std::size_t o = 0; o < n_obs; ++o) {
    for (std::size_t t = 0; t < points; ++t) {
      const auto& a = total.series[o * points + t];
      est.mean[o][t] = a.mean;
      est.sem[o][t] = a.has_sem() ? a.sem() : 0.0;
    }
    est.integral_mean[o] = total.integrals[o].mean;
    est.integral_sem[o] = total.integrals[o].has_sem() ? total.integrals[o].sem() : 0.0;
  }
  est.samples = samples;
  est.early_stops = total.early_stops;
  est.seed = seed;
  est.index_offset = opts.index_offset;
  est.scheme = scheme;
  est.k_free = schedule.k_free;
  est.rescaled = schedule.rescaled;
  est.survival_threshold = schedule.survival_threshold;
  return est;
}

/// Time-series ensemble for a parsed config.
inline EnsembleEstimate run_ensemble(const SimulationConfig& cfg, const EnsembleOptions& opts = {}) {
  cfg.validate();
  const auto h = build_hamiltonian(cfg);
  auto est = run_ensemble(h, cfg.noise, cfg.run.scheme, cfg.schedule(), cfg.run.samples, cfg.run.seed,
                          config_observables(cfg, h.space()), opts);
  est.run_id = detail::run_id(emit_config(cfg), cfg.run.seed);
  return est;
}

}  // namespace rpsse
