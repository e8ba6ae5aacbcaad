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
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rpsse/errors.hpp"
#include "rpsse/noise/process.hpp"
#include "rpsse/propagate/arnoldi.hpp"
#include "rpsse/propagate/generator.hpp"
#include "rpsse/spin/hamiltonian.hpp"
#include "rpsse/spin/operator.hpp"

namespace rpsse {

struct SpinState {
  Vector psi;
  double time = 0.0;
};

/// Time stepping and stop condition for one trajectory.
struct Schedule {
  double dt = 0.5;        // spin step, ns
  int substeps = 100;     // noise substeps per spin step
  double horizon = 0.0;   // ns
  /// Stop once the actual survival <1> (k_f decay included) drops below this; 0 disables.
  double survival_threshold = 0.0;
  /// Rate factored out of K. Recorded values carry e^{kf t} unless rescaled is false.
  double k_free = 0.0;
  bool rescaled = true;
  int record_stride = 1;
  KrylovOptions krylov{};

  std::size_t step_count() const {
    return static_cast<std::size_t>(std::llround(std::ceil(horizon / dt - 1e-9)));
  }

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("schedule: dt must be positive");
    if (substeps < 1) throw ConfigError("schedule: substeps must be >= 1");
    if (!(horizon >= 0.0)) throw ConfigError("schedule: horizon must be >= 0");
    if (record_stride < 1) throw ConfigError("schedule: record_stride must be >= 1");
    if (survival_threshold < 0.0) throw ConfigError("schedule: survival threshold must be >= 0");
  }
};

struct Observable {
  std::string name;
  SpinOperator op;
};

/// Survival 1, singlet P_S and triplet P_T, in that order.
inline std::vector<Observable> standard_observables(const HilbertSpace& space) {
  return {{"survival", SpinOperator::identity(space.dim())},
          {"singlet", singlet_projector(space)},
          {"triplet", triplet_projector(space)}};
}

struct TrajectoryRecord {
  std::vector<double> time;
  std::vector<std::string> names;
  /// values[o][t] = <Psi(t)|O_o|Psi(t)>.
  std::vector<std::vector<double>> values;
  bool stopped_early = false;

  std::size_t size() const { return time.size(); }
};

/// Supplies the trapezoid-averaged channel coefficients for each spin step.
/// Implementations: LiveNoise (stochastic processes) and FrozenPath (given f(t)).
class CoefficientSource {
 public:
  virtual ~CoefficientSource() = default;
  virtual void average(double t0, double dt, int substeps, std::span<double> fbar) = 0;
};

/// Drives the stochastic processes on substeps, starting from their stationary law.
template <class Rng>
class LiveNoise final : public CoefficientSource {
 public:
  LiveNoise(const FluctuatingHamiltonian& h, const NoiseProcess& process, Rng& rng)
      : h_(h), process_(process), rng_(rng), state_(process.init(rng)), f_(h.channel_count()) {}

  void average(double, double dt, int substeps, std::span<double> fbar) override {
    const std::size_t n = f_.size();
    std::fill(fbar.begin(), fbar.end(), 0.0);
    if (n == 0) return;
    h_.evaluate(state_, f_);
    for (std::size_t j = 0; j < n; ++j) fbar[j] += 0.5 * f_[j];
    const double h = dt / substeps;
    for (int k = 1; k <= substeps; ++k) {
      process_.step(state_, h, rng_);
      h_.evaluate(state_, f_);
      const double w = (k == substeps) ? 0.5 : 1.0;
      for (std::size_t j = 0; j < n; ++j) fbar[j] += w * f_[j];
    }
    for (std::size_t j = 0; j < n; ++j) fbar[j] /= substeps;
  }

  const ProcessState& state() const { return state_; }

 private:
  const FluctuatingHamiltonian& h_;
  const NoiseProcess& process_;
  Rng& rng_;
  ProcessState state_;
  std::vector<double> f_;
};

/// Deterministic coefficient path f(t), sampled on the substep grid.
class FrozenPath final : public CoefficientSource {
 public:
  using Path = std::function<void(double t, std::span<double> f)>;

  FrozenPath(std::size_t channels, Path path) : path_(std::move(path)), f_(channels) {}

  void average(double t0, double dt, int substeps, std::span<double> fbar) override {
    std::fill(fbar.begin(), fbar.end(), 0.0);
    if (f_.empty()) return;
    for (int k = 0; k <= substeps; ++k) {
      path_(t0 + dt * k / substeps, f_);
      const double w = (k == 0 || k == substeps) ? 0.5 : 1.0;
      for (std::size_t j = 0; j < f_.size(); ++j) fbar[j] += w * f_[j];
    }
    for (double& x : fbar) x /= substeps;
  }

 private:
  Path path_;
  std::vector<double> f_;
};

/// Records a step when sampled noise coefficients are replayed: wraps any
/// source and stores every averaged coefficient vector it hands out.
class RecordingSource final : public CoefficientSource {
 public:
  explicit RecordingSource(CoefficientSource& inner) : inner_(inner) {}
  void average(double t0, double dt, int substeps, std::span<double> fbar) override {
    inner_.average(t0, dt, substeps, fbar);
    steps_.emplace_back(fbar.begin(), fbar.end());
  }
  const std::vector<std::vector<double>>& steps() const { return steps_; }

 private:
  CoefficientSource& inner_;
  std::vector<std::vector<double>> steps_;
};

/// Replays per-step averaged coefficients captured by RecordingSource.
class ReplaySource final : public CoefficientSource {
 public:
  explicit ReplaySource(std::vector<std::vector<double>> steps) : steps_(std::move(steps)) {}
  void average(double, double, int, std::span<double> fbar) override {
    if (next_ >= steps_.size()) throw ConfigError("replay: recorded path is shorter than the schedule");
    const auto& s = steps_[next_++];
    std::copy(s.begin(), s.end(), fbar.begin());
  }

 private:
  std::vector<std::vector<double>> steps_;
  std::size_t next_ = 0;
};

/// psi <- exp(-i Omega dt) psi via Arnoldi.
inline KrylovStats arnoldi_exp_step(const StepGenerator& gen, Vector& psi, double dt, ArnoldiExp<Vector>& workspace) {
  if (psi.size() != gen.omega.rows()) throw ConfigError("arnoldi_exp_step: state dimension mismatch");
  return workspace.step([&](const Vector& x, Vector& y) { gen.apply_rhs(x, y); }, psi, dt);
}

inline KrylovStats arnoldi_exp_step(const StepGenerator& gen, Vector& psi, double dt, KrylovOptions opts = {}) {
  ArnoldiExp<Vector> ws(opts);
  return arnoldi_exp_step(gen, psi, dt, ws);
}

/// Worker-local propagator: owns the generator storage and Krylov workspace.
class SsePropagator {
 public:
  SsePropagator(const FluctuatingHamiltonian& h, const GeneratorAssembler& assembler, Schedule schedule)
      : h_(h), assembler_(assembler), schedule_(std::move(schedule)), krylov_(schedule_.krylov),
        fbar_(h.channel_count()) {
    schedule_.validate();
  }

  const Schedule& schedule() const { return schedule_; }

  TrajectoryRecord run(SpinState state, CoefficientSource& source, const std::vector<Observable>& observables) {
    if (static_cast<std::size_t>(state.psi.size()) != h_.dim()) throw ConfigError("propagate: state dimension mismatch");
    TrajectoryRecord rec;
    for (const auto& o : observables) {
      if (o.op.dim() != h_.dim()) throw ConfigError("propagate: observable '" + o.name + "' has wrong dimension");
      rec.names.push_back(o.name);
    }
    rec.values.resize(observables.size());
    const std::size_t steps = schedule_.step_count();
    const std::size_t reserve = steps / static_cast<std::size_t>(schedule_.record_stride) + 2;
    rec.time.reserve(reserve);
    for (auto& v : rec.values) v.reserve(reserve);

    const double dt = schedule_.dt;
    const double t_start = state.time;
    record(rec, state, observables);
    for (std::size_t n = 1; n <= steps; ++n) {
      const double t0 = t_start + (n - 1) * dt;
      source.average(t0, dt, schedule_.substeps, fbar_);
      assembler_.fill(fbar_, gen_);
      gen_.t0 = t0;
      gen_.dt = dt;
      arnoldi_exp_step(gen_, state.psi, dt, krylov_);
      state.time = t_start + n * dt;
      if (!state.psi.allFinite()) {
        std::ostringstream msg;
        msg << "propagate: non-finite state at t = " << state.time << " ns (step " << n << ")";
        throw NumericError(msg.str());
      }
      const bool last = n == steps;
      const bool stop = schedule_.survival_threshold > 0.0 &&
                        state.psi.squaredNorm() * std::exp(-schedule_.k_free * (state.time - t_start)) <
                            schedule_.survival_threshold;
      // Records stay on the stride grid so early-stopped series are a prefix of the full one.
      if (n % static_cast<std::size_t>(schedule_.record_stride) == 0 || last) record(rec, state, observables);
      if (stop && !last) {
        rec.stopped_early = true;
        break;
      }
    }
    return rec;
  }

 private:
  void record(TrajectoryRecord& rec, const SpinState& state, const std::vector<Observable>& observables) {
    const double t = state.time;
    const double factor = schedule_.rescaled ? 1.0 : std::exp(-schedule_.k_free * t);
    rec.time.push_back(t);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      const double v = factor * observables[o].op.expectation(state.psi).real();
      if (!std::isfinite(v)) throw NumericError("propagate: non-finite observable '" + observables[o].name + "'");
      rec.values[o].push_back(v);
    }
  }

  const FluctuatingHamiltonian& h_;
  const GeneratorAssembler& assembler_;
  Schedule schedule_;
  ArnoldiExp<Vector> krylov_;
  StepGenerator gen_;
  std::vector<double> fbar_;
};

/// One trajectory from psi0 under the given coefficient source.
inline TrajectoryRecord propagate_sse(const SpinState& psi0, const FluctuatingHamiltonian& h, CoefficientSource& source,
                                      const Schedule& schedule, const std::vector<Observable>& observables) {
  GeneratorAssembler assembler(h);
  SsePropagator prop(h, assembler, schedule);
  return prop.run(psi0, source, observables);
}

}  // namespace rpsse
