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

// File formats.
//
// Series CSV: header `time_ns,<obs>_mean,<obs>_sem,...`, one row per record.
// Sweep CSV: `field_mT,phi_t,phi_t_sem,phi_t_rel,phi_t_rel_sem,k_cr_per_ns,
//   k_cr_sem,phi_s,phi_s_sem,phi_t_tail,phi_s_tail,inv_k_cr_tail_ns`.
// Every number is printed with %.17g, so values round-trip bit-exactly;
// an undefined relative yield is written as `nan`.
// JSON output carries the same columns as arrays. The manifest is JSON.

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "rpsse/constants.hpp"
#include "rpsse/harness/config.hpp"
#include "rpsse/harness/ensemble.hpp"
#include "rpsse/harness/yields.hpp"

namespace rpsse {

inline constexpr const char* kVersion = "0.1.0";

inline void write_series_csv(std::ostream& out, const EnsembleEstimate& e) {
  out << "time_ns";
  for (const auto& n : e.names) out << ',' << n << "_mean," << n << "_sem";
  out << '\n';
  for (std::size_t t = 0; t < e.time.size(); ++t) {
    out << detail::fmt(e.time[t]);
    for (std::size_t o = 0; o < e.names.size(); ++o) {
      out << ',' << detail::fmt(e.mean[o][t]) << ',' << detail::fmt(e.sem[o][t]);
    }
    out << '\n';
  }
}

inline nlohmann::json series_json(const EnsembleEstimate& e) {
  nlohmann::json j;
  j["time_ns"] = e.time;
  for (std::size_t o = 0; o < e.names.size(); ++o) {
    j["series"][e.names[o]] = {{"mean", e.mean[o]}, {"sem", e.sem[o]}};
  }
  j["samples"] = e.samples;
  j["early_stops"] = e.early_stops;
  j["rescaled"] = e.rescaled;
  return j;
}

inline const char* kSweepColumns =
    "field_mT,phi_t,phi_t_sem,phi_t_rel,phi_t_rel_sem,k_cr_per_ns,k_cr_sem,phi_s,phi_s_sem,phi_t_tail,phi_s_tail,"
    "inv_k_cr_tail_ns";

inline void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  using detail::fmt;
  out << kSweepColumns << '\n';
  for (const auto& p : s.points) {
    const auto& y = p.yields;
    out << fmt(y.field) << ',' << fmt(y.phi_t) << ',' << fmt(y.phi_t_sem) << ',' << fmt(p.phi_t_relative) << ','
        << fmt(p.phi_t_relative_sem) << ',' << fmt(y.k_cr) << ',' << fmt(y.k_cr_sem) << ',' << fmt(y.phi_s) << ','
        << fmt(y.phi_s_sem) << ',' << fmt(y.phi_t_tail) << ',' << fmt(y.phi_s_tail) << ',' << fmt(y.inv_k_cr_tail)
        << '\n';
  }
}

inline nlohmann::json sweep_json(const SweepResult& s) {
  nlohmann::json j;
  auto col = [&](auto get) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : s.points) {
      const double v = get(p);
      // JSON has no NaN; undefined values become null.
      a.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json());
    }
    return a;
  };
  j["field_mT"] = col([](const SweepPoint& p) { return p.yields.field; });
  j["phi_t"] = col([](const SweepPoint& p) { return p.yields.phi_t; });
  j["phi_t_sem"] = col([](const SweepPoint& p) { return p.yields.phi_t_sem; });
  j["phi_t_rel"] = col([](const SweepPoint& p) { return p.phi_t_relative; });
  j["phi_t_rel_sem"] = col([](const SweepPoint& p) { return p.phi_t_relative_sem; });
  j["k_cr_per_ns"] = col([](const SweepPoint& p) { return p.yields.k_cr; });
  j["k_cr_sem"] = col([](const SweepPoint& p) { return p.yields.k_cr_sem; });
  j["phi_s"] = col([](const SweepPoint& p) { return p.yields.phi_s; });
  j["phi_s_sem"] = col([](const SweepPoint& p) { return p.yields.phi_s_sem; });
  j["phi_t_tail"] = col([](const SweepPoint& p) { return p.yields.phi_t_tail; });
  j["phi_s_tail"] = col([](const SweepPoint& p) { return p.yields.phi_s_tail; });
  j["inv_k_cr_tail_ns"] = col([](const SweepPoint& p) { return p.yields.inv_k_cr_tail; });
  j["relative_defined"] = s.relative_defined;
  return j;
}

/// Sidecar describing a run: resolved config (defaults included), constants
/// and identifiers. Thread count is left out so that all files are
/// independent of it.
inline nlohmann::json manifest_json(const SimulationConfig& cfg, const std::string& command, const std::string& run_id,
                                    std::uint64_t seed, std::size_t samples) {
  nlohmann::json j;
  j["program"] = "rpsse";
  j["version"] = kVersion;
  j["command"] = command;
  j["run_id"] = run_id;
  j["seed"] = seed;
  j["samples"] = samples;
  j["scheme"] = scheme_name(cfg.run.scheme);
  j["config"] = emit_config(cfg);
  j["constants"] = {{"gamma_e_rad_per_ns_mT", constants::gamma_e},
                    {"g_electron", constants::g_electron},
                    {"bohr_over_hbar_rad_per_ns_mT", constants::bohr_over_hbar}};
  j["units"] = {{"time", "ns"}, {"rate", "1/ns"}, {"field", "mT"}};
  j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace rpsse
