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

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rpsse/harness/config.hpp"
#include "rpsse/harness/ensemble.hpp"

namespace rpsse {

struct YieldOptions {
  /// The series must end with the unscaled survival below this.
  double threshold = 1e-5;
};

/// Yields from one ensemble. Integrals are trapezoid rules on the record grid;
/// the *_tail members estimate what lies beyond the last record and are not
/// included in the main values.
struct YieldResult {
  double field = 0.0;  // mT
  double phi_t = 0.0;
  double phi_t_sem = 0.0;
  double phi_s = 0.0;
  double phi_s_sem = 0.0;
  double inv_k_cr = 0.0;  // ns
  double inv_k_cr_sem = 0.0;
  double k_cr = 0.0;  // 1/ns
  double k_cr_sem = 0.0;
  double phi_t_tail = 0.0;
  double phi_s_tail = 0.0;
  double inv_k_cr_tail = 0.0;
  double final_survival = 0.0;
};

namespace detail {

inline double trapezoid(const EnsembleEstimate& e, std::size_t o) {
  double s = 0.0;
  for (std::size_t t = 1; t < e.time.size(); ++t) {
    s += 0.5 * (e.time[t] - e.time[t - 1]) * (e.unscaled(o, t) + e.unscaled(o, t - 1));
  }
  return s;
}

/// Last record with nonzero survival. Early-stopped trajectories are zero
/// filled, so the series may end in exact zeros.
inline std::size_t last_nonzero(const EnsembleEstimate& e, std::size_t one) {
  std::size_t last = e.time.size() - 1;
  while (last > 0 && e.unscaled(one, last) == 0.0) --last;
  return last;
}

/// Decay rate over the last decade of the survival curve ending at `last`:
/// the latest record at least ten times the final value sets the window.
inline double tail_rate(const EnsembleEstimate& e, std::size_t one, std::size_t last) {
  const double s_end = e.unscaled(one, last);
  if (!(s_end > 0.0)) return std::numeric_limits<double>::infinity();
  for (std::size_t t = last; t-- > 0;) {
    const double s = e.unscaled(one, t);
    if (s >= 10.0 * s_end) return std::log(s / s_end) / (e.time[last] - e.time[t]);
  }
  // No full decade recorded: fall back to the whole series.
  const double s0 = e.unscaled(one, 0);
  if (s0 > s_end && e.time[last] > e.time[0]) return std::log(s0 / s_end) / (e.time[last] - e.time[0]);
  return 0.0;
}

}  // namespace detail

/// Phi_T = k_T int <P_T>, Phi_S = k_S int <P_S>, 1/k_CR = int <1>.
///
/// Needs survival, singlet and triplet series. Refuses a series whose final
/// survival is above the threshold. Tail terms extrapolate the last decade of
/// decay exponentially. The trapezoid rule is biased by about (k dt)^2 / 12.
inline YieldResult compute_yields(const EnsembleEstimate& e, double k_singlet, double k_triplet,
                                  const YieldOptions& opts = {}) {
  if (!(k_singlet >= 0.0) || !(k_triplet >= 0.0)) throw ConfigError("compute_yields: rates must be >= 0");
  if (e.time.size() < 2) throw ConfigError("compute_yields: series needs at least two points");
  const std::size_t one = e.index("survival"), ps = e.index("singlet"), pt = e.index("triplet");
  const std::size_t last = e.time.size() - 1;

  YieldResult y;
  y.final_survival = e.unscaled(one, last);
  if (!(y.final_survival < opts.threshold)) {
    std::ostringstream msg;
    msg << "compute_yields: survival at t = " << e.time[last] << " ns is " << y.final_survival
        << ", above the threshold " << opts.threshold << "; extend the horizon";
    throw ConfigError(msg.str());
  }

  y.inv_k_cr = detail::trapezoid(e, one);
  y.phi_s = k_singlet * detail::trapezoid(e, ps);
  y.phi_t = k_triplet * detail::trapezoid(e, pt);
  y.inv_k_cr_sem = e.integral_sem[one];
  y.phi_s_sem = k_singlet * e.integral_sem[ps];
  y.phi_t_sem = k_triplet * e.integral_sem[pt];
  if (!(y.inv_k_cr > 0.0)) throw NumericError("compute_yields: non-positive survival integral");
  y.k_cr = 1.0 / y.inv_k_cr;
  y.k_cr_sem = y.inv_k_cr_sem / (y.inv_k_cr * y.inv_k_cr);

  const std::size_t end = detail::last_nonzero(e, one);
  const double rate = detail::tail_rate(e, one, end);
  if (std::isinf(rate)) return y;  // decayed to exactly zero
  if (!(rate > 0.0)) {
    y.inv_k_cr_tail = y.phi_s_tail = y.phi_t_tail = std::numeric_limits<double>::infinity();
    return y;
  }
  y.inv_k_cr_tail = e.unscaled(one, end) / rate;
  y.phi_s_tail = k_singlet * e.unscaled(ps, end) / rate;
  y.phi_t_tail = k_triplet * e.unscaled(pt, end) / rate;
  return y;
}

struct DecayFit {
  double rate = 0.0;  // 1/ns
  double rate_se = 0.0;
  double amplitude = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of ln v = ln a - k t over the points with v > floor.
inline DecayFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& v, double floor) {
  if (t.size() != v.size()) throw ConfigError("fit_exponential_decay: size mismatch");
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(v[i] > floor)) continue;
    const double y = std::log(v[i]);
    pts.emplace_back(t[i], y);
    n += 1;
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
  }
  if (pts.size() < 3) throw NumericError("fit_exponential_decay: fewer than three points above the floor");
  const double det = n * sxx - sx * sx;
  if (!(det > 0.0)) throw NumericError("fit_exponential_decay: degenerate time grid");
  const double slope = (n * sxy - sx * sy) / det;
  const double icpt = (sy - slope * sx) / n;
  double rss = 0.0;
  for (const auto& [x, y] : pts) rss += (y - icpt - slope * x) * (y - icpt - slope * x);
  DecayFit f;
  f.rate = -slope;
  f.rate_se = std::sqrt(rss / (n - 2) * n / det);
  f.amplitude = std::exp(icpt);
  f.points = pts.size();
  return f;
}

struct SweepPoint {
  YieldResult yields;
  double phi_t_relative = std::numeric_limits<double>::quiet_NaN();
  double phi_t_relative_sem = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::vector<SweepPoint> points;
  YieldResult zero_field;
  bool relative_defined = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string run_id;
};

/// One independent ensemble per field value (B along the sweep axis), plus a
/// zero-field ensemble for the relative curve when 0 is not among the values.
/// Point p uses trajectory indices p*M .. p*M + M - 1.
inline SweepResult field_sweep(const SimulationConfig& cfg, std::vector<double> fields,
                               const EnsembleOptions& opts = {}, const YieldOptions& yopts = {}) {
  cfg.validate();
  if (fields.empty()) throw ConfigError("field_sweep: no field values");
  for (double b : fields) {
    if (!std::isfinite(b)) throw ConfigError("field_sweep: field values must be finite");
  }
  const Eigen::Vector3d axis = cfg.sweep.axis.normalized();
  const std::size_t m = cfg.sweep.samples;
  const auto schedule = cfg.schedule();

  auto run_point = [&](double b, std::uint64_t slot) {
    SimulationConfig c = cfg;
    c.system.field = b * axis;
    const auto h = build_hamiltonian(c);
    EnsembleOptions o = opts;
    o.index_offset = opts.index_offset + slot * m;
    const auto est = run_ensemble(h, c.noise, c.run.scheme, schedule, m, c.run.seed,
                                  standard_observables(h.space()), o);
    auto y = compute_yields(est, c.system.k_singlet, c.system.k_triplet, yopts);
    y.field = b;
    return y;
  };

  SweepResult res;
  res.samples = m;
  res.seed = cfg.run.seed;
  std::ostringstream id;
  for (double b : fields) id << detail::fmt(b) << ' ';
  res.run_id = detail::run_id(emit_config(cfg) + id.str(), cfg.run.seed);

  long zero = -1;
  for (std::size_t p = 0; p < fields.size(); ++p) {
    SweepPoint pt;
    pt.yields = run_point(fields[p], p);
    if (fields[p] == 0.0 && zero < 0) zero = static_cast<long>(p);
    res.points.push_back(pt);
  }
  res.zero_field = zero >= 0 ? res.points[static_cast<std::size_t>(zero)].yields : run_point(0.0, fields.size());

  const auto& z = res.zero_field;
  res.relative_defined = z.phi_t > 0.0;
  if (res.relative_defined) {
    for (std::size_t p = 0; p < res.points.size(); ++p) {
      auto& pt = res.points[p];
      const double r = pt.yields.phi_t / z.phi_t;
      pt.phi_t_relative = r;
      if (zero >= 0 && static_cast<std::size_t>(zero) == p) {
        pt.phi_t_relative_sem = 0.0;
      } else {
        // Independent ensembles: relative errors add in quadrature.
        const double a = pt.yields.phi_t > 0.0 ? pt.yields.phi_t_sem / pt.yields.phi_t : 0.0;
        const double c = z.phi_t_sem / z.phi_t;
        pt.phi_t_relative_sem = std::abs(r) * std::sqrt(a * a + c * c);
      }
    }
  }
  return res;
}

}  // namespace rpsse
