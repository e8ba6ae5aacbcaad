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

// Plain-text run configuration.
//
//   # comment
//   [system]
//   field = 0 0 1 mT          # a single number means along z
//   k_singlet = 2.0 /us
//   [radical1]
//   g = 2.0023                # scalar, 3 numbers (diagonal) or 9 / block
//   [nucleus radical1 N5]
//   spin = 1
//   hyperfine =
//     -0.099 0 0
//     0 -0.088 0
//     0 0 1.757
//   [random_field]
//   k_rf = 0.2 /us
//   tau = 0.0568 ns
//
// Values take an optional trailing unit. Output always uses ns, 1/ns and mT.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpsse/constants.hpp"
#include "rpsse/errors.hpp"
#include "rpsse/noise/process.hpp"
#include "rpsse/propagate/sse.hpp"
#include "rpsse/sampling/sampling.hpp"
#include "rpsse/spin/hamiltonian.hpp"
#include "rpsse/spin/hilbert_space.hpp"
#include "rpsse/spin/system.hpp"

namespace rpsse {

struct RunSettings {
  SamplingScheme scheme = SamplingScheme::suz;
  std::size_t samples = 1024;
  std::uint64_t seed = 1;
  double dt = 0.5;         // ns
  int substeps = 100;
  double horizon = 10000;  // ns
  double survival_threshold = 1e-5;
  int record_stride = 1;
  bool rescaled = true;
  int krylov_dim = 32;
  double krylov_tol = 1e-10;
  std::vector<std::string> observables{"survival", "singlet", "triplet"};
};

struct SweepSettings {
  std::vector<double> fields;  // mT
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  std::size_t samples = 256;
};

struct OutputSettings {
  std::string directory = ".";
  std::string format = "csv";
  std::string prefix = "rpsse";
};

struct SimulationConfig {
  SpinSystemSpec system;
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  std::size_t dimension_budget = kDefaultDimensionBudget;
  NoiseModelSpec noise;
  /// When set, <dB^2> is derived from it and rf_tau.
  std::optional<double> k_rf;
  RunSettings run;
  SweepSettings sweep;
  OutputSettings output;

  Schedule schedule() const {
    Schedule s;
    s.dt = run.dt;
    s.substeps = run.substeps;
    s.horizon = run.horizon;
    s.survival_threshold = run.survival_threshold;
    s.k_free = system.k_free;
    s.rescaled = run.rescaled;
    s.record_stride = run.record_stride;
    s.krylov.max_dim = run.krylov_dim;
    s.krylov.tol = run.krylov_tol;
    return s;
  }

  void validate() const {
    system.validate();
    noise.validate();
    schedule().validate();
    if (run.samples < 1) throw ConfigError("run: samples must be >= 1");
    if (run.krylov_dim < 2) throw ConfigError("run: krylov_dim must be >= 2");
    if (!(run.krylov_tol > 0.0)) throw ConfigError("run: krylov_tol must be positive");
    if (sweep.samples < 1) throw ConfigError("sweep: samples must be >= 1");
    if (!(sweep.axis.norm() > 0.0) || !sweep.axis.allFinite()) throw ConfigError("sweep: axis must be a nonzero vector");
    for (double b : sweep.fields) {
      if (!std::isfinite(b)) throw ConfigError("sweep: field values must be finite");
    }
    if (output.format != "csv" && output.format != "json") throw ConfigError("output: format must be csv or json");
    if (k_rf && !(*k_rf >= 0.0)) throw ConfigError("random_field: k_rf must be >= 0");
    for (const auto& name : run.observables) {
      if (name != "survival" && name != "singlet" && name != "triplet" && name != "nuclear_z") {
        throw ConfigError("run: unknown observable '" + name + "'");
      }
    }
  }
};

/// Observables named in the config. nuclear_z is the total nuclear I_z.
inline std::vector<Observable> config_observables(const SimulationConfig& cfg, const HilbertSpace& space) {
  std::vector<Observable> out;
  for (const auto& name : cfg.run.observables) {
    if (name == "survival") {
      out.push_back({name, SpinOperator::identity(space.dim())});
    } else if (name == "singlet") {
      out.push_back({name, singlet_projector(space)});
    } else if (name == "triplet") {
      out.push_back({name, triplet_projector(space)});
    } else if (name == "nuclear_z") {
      SpinOperator iz = SpinOperator::zero(space.dim());
      for (std::size_t k = 0; k < space.nucleus_count(); ++k) {
        iz += spin_operator(space, HilbertSpace::nucleus_site(k), Axis::z);
      }
      out.push_back({name, iz.with_hermitian(true)});
    } else {
      throw ConfigError("unknown observable '" + name + "'");
    }
  }
  return out;
}

inline FluctuatingHamiltonian build_hamiltonian(const SimulationConfig& cfg) {
  return assemble_hamiltonian(cfg.system, cfg.noise, cfg.orientation, cfg.dimension_budget);
}

namespace detail {

enum class Unit { none, rate, time, field, field2, inv_field };

struct UnitFactor {
  const char* name;
  Unit kind;
  double factor;
};

inline constexpr UnitFactor kUnits[] = {
    {"/ns", Unit::rate, 1.0},       {"1/ns", Unit::rate, 1.0},       {"ns^-1", Unit::rate, 1.0},
    {"/us", Unit::rate, 1e-3},      {"1/us", Unit::rate, 1e-3},      {"us^-1", Unit::rate, 1e-3},
    {"/s", Unit::rate, 1e-9},       {"1/s", Unit::rate, 1e-9},       {"s^-1", Unit::rate, 1e-9},
    {"ps", Unit::time, 1e-3},       {"ns", Unit::time, 1.0},         {"us", Unit::time, 1e3},
    {"mT", Unit::field, 1.0},       {"T", Unit::field, 1e3},         {"uT", Unit::field, 1e-3},
    {"G", Unit::field, 0.1},        {"mT^2", Unit::field2, 1.0},     {"/mT", Unit::inv_field, 1.0},
    {"1/mT", Unit::inv_field, 1.0}, {"mT^-1", Unit::inv_field, 1.0},
};

inline const char* unit_label(Unit u) {
  switch (u) {
    case Unit::none: return "dimensionless";
    case Unit::rate: return "a rate";
    case Unit::time: return "a time";
    case Unit::field: return "a field";
    case Unit::field2: return "a squared field";
    case Unit::inv_field: return "an inverse field";
  }
  return "?";
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class ConfigReader {
 public:
  ConfigReader(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      lines_.push_back(trim(line));
    }
  }

  SimulationConfig parse() {
    SimulationConfig cfg;
    bool rf_seen = false;
    std::optional<double> rf_mean_square;
    std::optional<double> rf_tau_gamma;
    std::optional<double> rf_tau;
    std::map<std::string, std::size_t> seen_sections;
    std::map<std::string, std::size_t> seen_keys;
    std::string section;
    Nucleus* nucleus = nullptr;
    bool nucleus_spin_set = false;

    auto finish_nucleus = [&] {
      if (nucleus && !nucleus_spin_set) nucleus->two_spin = 1;
      nucleus = nullptr;
      nucleus_spin_set = false;
    };

    for (line_ = 0; line_ < lines_.size(); ++line_) {
      const std::string& raw = lines_[line_];
      if (raw.empty()) continue;
      if (raw.front() == '[') {
        if (raw.back() != ']') fail("unterminated section header");
        finish_nucleus();
        const auto words = split_ws(raw.substr(1, raw.size() - 2));
        if (words.empty()) fail("empty section header");
        section = words[0];
        seen_keys.clear();
        if (section == "nucleus") {
          if (words.size() != 3) fail("expected [nucleus radical1|radical2 <label>]");
          const int r = radical_index(words[1]);
          auto& list = cfg.system.radicals[static_cast<std::size_t>(r)].nuclei;
          for (const auto& n : list) {
            if (n.label == words[2]) fail("duplicate nucleus '" + words[2] + "' in " + words[1]);
          }
          list.push_back(Nucleus{words[2], 1, Eigen::Matrix3d::Zero()});
          nucleus = &list.back();
          continue;
        }
        if (words.size() != 1) fail("unexpected words in section header [" + raw.substr(1, raw.size() - 2) + "]");
        static const char* known[] = {"system", "radical1", "radical2", "random_field", "rotor",
                                      "two_site", "run",    "sweep",    "output"};
        bool ok = false;
        for (const char* k : known) ok = ok || section == k;
        if (!ok) fail("unknown section [" + section + "]");
        if (seen_sections.count(section)) fail("duplicate section [" + section + "]");
        seen_sections[section] = line_ + 1;
        if (section == "random_field") cfg.noise.random_field = rf_seen = true;
        if (section == "rotor") cfg.noise.rotor = true;
        if (section == "two_site") cfg.noise.two_site = true;
        continue;
      }
      const auto eq = raw.find('=');
      if (eq == std::string::npos) fail("expected 'key = value'");
      const std::string key = trim(raw.substr(0, eq));
      value_ = trim(raw.substr(eq + 1));
      if (section.empty()) fail("key '" + key + "' outside any section");
      if (seen_keys.count(key)) fail("duplicate key '" + key + "'");
      seen_keys[key] = line_ + 1;
      key_ = key;

      if (section == "system") {
        auto& s = cfg.system;
        if (key == "field") s.field = field_vector();
        else if (key == "exchange") s.exchange = scalar(Unit::field);
        else if (key == "dipolar") s.dipolar = tensor(Unit::field);
        else if (key == "k_singlet") s.k_singlet = nonneg(scalar(Unit::rate));
        else if (key == "k_triplet") s.k_triplet = nonneg(scalar(Unit::rate));
        else if (key == "k_free") s.k_free = nonneg(scalar(Unit::rate));
        else if (key == "orientation") cfg.orientation = quaternion();
        else if (key == "dimension_budget") cfg.dimension_budget = count(1);
        else unknown();
      } else if (section == "radical1" || section == "radical2") {
        if (key == "g") cfg.system.radicals[section == "radical1" ? 0 : 1].g = tensor(Unit::none);
        else unknown();
      } else if (section == "nucleus") {
        if (!nucleus) fail("nucleus section without header");
        if (key == "spin") {
          const double v = scalar(Unit::none);
          try {
            nucleus->two_spin = two_spin_from(v);
          } catch (const ConfigError& e) {
            fail(e.what());
          }
          nucleus_spin_set = true;
        } else if (key == "hyperfine") {
          nucleus->hyperfine = tensor(Unit::field);
        } else {
          unknown();
        }
      } else if (section == "random_field") {
        if (key == "enabled") cfg.noise.random_field = boolean();
        else if (key == "tau") rf_tau = positive(scalar(Unit::time));
        else if (key == "tau_gamma_e") rf_tau_gamma = positive(scalar(Unit::inv_field));
        else if (key == "mean_square") rf_mean_square = nonneg(scalar(Unit::field2));
        else if (key == "k_rf") cfg.k_rf = nonneg(scalar(Unit::rate));
        else if (key == "scheme") cfg.noise.ou_scheme = ou_scheme();
        else unknown();
      } else if (section == "rotor") {
        if (key == "enabled") cfg.noise.rotor = boolean();
        else if (key == "diffusion") cfg.noise.rotor_diffusion = rate_vector();
        else unknown();
      } else if (section == "two_site") {
        if (key == "enabled") cfg.noise.two_site = boolean();
        else if (key == "sigma_j") cfg.noise.sigma_j = nonneg(scalar(Unit::field));
        else if (key == "tau_j") cfg.noise.tau_j = positive(scalar(Unit::time));
        else unknown();
      } else if (section == "run") {
        auto& r = cfg.run;
        if (key == "scheme") r.scheme = sampling_scheme();
        else if (key == "samples") r.samples = count(1);
        else if (key == "seed") r.seed = seed();
        else if (key == "dt") r.dt = positive(scalar(Unit::time));
        else if (key == "substeps") r.substeps = static_cast<int>(count(1));
        else if (key == "horizon") r.horizon = nonneg(scalar(Unit::time));
        else if (key == "survival_threshold") r.survival_threshold = nonneg(scalar(Unit::none));
        else if (key == "record_stride") r.record_stride = static_cast<int>(count(1));
        else if (key == "rescaled") r.rescaled = boolean();
        else if (key == "krylov_dim") r.krylov_dim = static_cast<int>(count(2));
        else if (key == "krylov_tol") r.krylov_tol = positive(scalar(Unit::none));
        else if (key == "observables") r.observables = split_ws(value_);
        else unknown();
      } else if (section == "sweep") {
        if (key == "fields") cfg.sweep.fields = list(Unit::field);
        else if (key == "range") cfg.sweep.fields = range();
        else if (key == "axis") cfg.sweep.axis = vector3(Unit::none);
        else if (key == "samples") cfg.sweep.samples = count(1);
        else unknown();
      } else if (section == "output") {
        if (key == "directory") cfg.output.directory = text();
        else if (key == "format") cfg.output.format = text();
        else if (key == "prefix") cfg.output.prefix = text();
        else unknown();
      }
    }
    finish_nucleus();

    // Random-field amplitude: exactly one of mean_square or k_rf; tau or tau_gamma_e.
    if (rf_tau && rf_tau_gamma) fail_at(seen_sections["random_field"], "give tau or tau_gamma_e, not both");
    if (rf_tau) cfg.noise.rf_tau = *rf_tau;
    if (rf_tau_gamma) cfg.noise.rf_tau = *rf_tau_gamma / constants::gamma_e;
    if (rf_mean_square && cfg.k_rf) fail_at(seen_sections["random_field"], "give mean_square or k_rf, not both");
    if (rf_mean_square) cfg.noise.rf_mean_square = *rf_mean_square;
    if (cfg.k_rf) cfg.noise.rf_mean_square = rf_mean_square_from_rate(*cfg.k_rf, cfg.noise.rf_tau);
    if (rf_seen && cfg.noise.random_field && !rf_mean_square && !cfg.k_rf) {
      fail_at(seen_sections["random_field"], "random field needs mean_square or k_rf");
    }
    if (!cfg.noise.random_field) cfg.k_rf.reset();

    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(source_ + ": " + e.what());
    }
    return cfg;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(line_ + 1, msg); }
  [[noreturn]] void fail_at(std::size_t line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }
  [[noreturn]] void unknown() const { fail("unknown key '" + key_ + "'"); }

  int radical_index(const std::string& w) const {
    if (w == "radical1") return 0;
    if (w == "radical2") return 1;
    fail("nucleus must belong to radical1 or radical2, got '" + w + "'");
  }

  // Splits value_ into numbers and an optional trailing unit, scaled to internal units.
  std::vector<double> numbers(Unit kind, const std::vector<std::string>& words) const {
    std::vector<std::string> w = words;
    double factor = 1.0;
    if (!w.empty() && !to_double(w.back())) {
      const std::string u = w.back();
      w.pop_back();
      bool found = false;
      for (const auto& e : kUnits) {
        if (u == e.name) {
          if (e.kind != kind) {
            fail("unit '" + u + "' is not valid for '" + key_ + "', which expects " + unit_label(kind));
          }
          factor = e.factor;
          found = true;
        }
      }
      if (!found) fail("unknown unit or non-numeric value '" + u + "'");
    }
    std::vector<double> out;
    for (const auto& t : w) {
      const auto v = to_double(t);
      if (!v) fail("non-numeric value '" + t + "'");
      if (!std::isfinite(*v)) fail("non-finite value for '" + key_ + "'");
      out.push_back(*v * factor);
    }
    return out;
  }

  std::vector<double> numbers(Unit kind) const { return numbers(kind, split_ws(value_)); }

  double scalar(Unit kind) const {
    const auto v = numbers(kind);
    if (v.size() != 1) fail("'" + key_ + "' expects one number");
    return v[0];
  }

  double positive(double v) const {
    if (!(v > 0.0)) fail("'" + key_ + "' must be positive");
    return v;
  }
  double nonneg(double v) const {
    if (!(v >= 0.0)) fail("'" + key_ + "' must be >= 0");
    return v;
  }

  std::size_t count(std::size_t min) const {
    const auto w = split_ws(value_);
    if (w.size() != 1) fail("'" + key_ + "' expects one integer");
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(w[0].c_str(), &end, 10);
    if (end != w[0].c_str() + w[0].size() || errno != 0) fail("'" + key_ + "' expects an integer");
    if (v < static_cast<long long>(min)) fail("'" + key_ + "' must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  std::uint64_t seed() const {
    const auto w = split_ws(value_);
    if (w.size() != 1 || w[0].empty() || w[0][0] == '-') fail("'seed' expects a non-negative integer");
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(w[0].c_str(), &end, 0);
    if (end != w[0].c_str() + w[0].size() || errno != 0) fail("'seed' expects a non-negative integer");
    return v;
  }

  bool boolean() const {
    const std::string v = value_;
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail("'" + key_ + "' expects true or false");
  }

  std::string text() const {
    if (value_.empty()) fail("'" + key_ + "' must not be empty");
    return value_;
  }

  Eigen::Vector3d vector3(Unit kind) const {
    const auto v = numbers(kind);
    if (v.size() != 3) fail("'" + key_ + "' expects three numbers");
    return {v[0], v[1], v[2]};
  }

  Eigen::Vector3d field_vector() const {
    const auto v = numbers(Unit::field);
    if (v.size() == 1) return {0.0, 0.0, v[0]};
    if (v.size() == 3) return {v[0], v[1], v[2]};
    fail("'field' expects one number (along z) or three");
  }

  Eigen::Vector3d rate_vector() const {
    const auto v = numbers(Unit::rate);
    if (v.size() == 1) return Eigen::Vector3d::Constant(v[0]);
    if (v.size() == 3) return {v[0], v[1], v[2]};
    fail("'" + key_ + "' expects one number (isotropic) or three");
  }

  Eigen::Quaterniond quaternion() const {
    const auto v = numbers(Unit::none);
    if (v.size() != 4) fail("'orientation' expects a quaternion w x y z");
    Eigen::Quaterniond q(v[0], v[1], v[2], v[3]);
    if (!(q.norm() > 0.0)) fail("'orientation' must be a nonzero quaternion");
    return q;
  }

  // Scalar (isotropic), 3 numbers (diagonal), 9 numbers (row-major), or an
  // empty value followed by three rows.
  Eigen::Matrix3d tensor(Unit kind) {
    std::vector<double> v;
    const auto head = split_ws(value_);
    if (head.empty() || (head.size() == 1 && !to_double(head[0]))) {
      std::vector<std::string> words;
      const std::size_t header = line_;
      for (int row = 0; row < 3; ++row) {
        ++line_;
        while (line_ < lines_.size() && lines_[line_].empty()) ++line_;
        if (line_ >= lines_.size() || lines_[line_].front() == '[' ||
            lines_[line_].find('=') != std::string::npos) {
          fail_at(header + 1, "tensor '" + key_ + "' needs three rows");
        }
        auto r = split_ws(lines_[line_]);
        if (r.size() != 3) fail("tensor row must have three numbers");
        words.insert(words.end(), r.begin(), r.end());
      }
      words.insert(words.end(), head.begin(), head.end());
      v = numbers(kind, words);
    } else {
      v = numbers(kind);
    }
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    if (v.size() == 1) {
      m.diagonal().setConstant(v[0]);
    } else if (v.size() == 3) {
      m.diagonal() << v[0], v[1], v[2];
    } else if (v.size() == 9) {
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = v[static_cast<std::size_t>(i)];
    } else {
      fail("tensor '" + key_ + "' expects 1, 3 or 9 numbers");
    }
    return m;
  }

  std::vector<double> list(Unit kind) const {
    auto v = numbers(kind);
    if (v.empty()) fail("'" + key_ + "' expects at least one number");
    return v;
  }

  std::vector<double> range() const {
    auto w = split_ws(value_);
    if (w.size() < 3) fail("'range' expects start stop count [unit]");
    const auto n_word = w[2];
    w.erase(w.begin() + 2);
    const auto ends = numbers(Unit::field, w);
    if (ends.size() != 2) fail("'range' expects start stop count [unit]");
    const auto n = to_double(n_word);
    if (!n || *n < 1 || std::floor(*n) != *n) fail("'range' count must be a positive integer");
    const auto points = static_cast<std::size_t>(*n);
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
      out[i] = points == 1 ? ends[0] : ends[0] + (ends[1] - ends[0]) * static_cast<double>(i) / (points - 1);
    }
    return out;
  }

  SamplingScheme sampling_scheme() const {
    try {
      return parse_scheme(value_);
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  }

  OuScheme ou_scheme() const {
    if (value_ == "exact") return OuScheme::exact;
    if (value_ == "midpoint") return OuScheme::midpoint;
    if (value_ == "as_printed") return OuScheme::as_printed;
    fail("'scheme' expects exact, midpoint or as_printed");
  }

  std::string source_;
  std::vector<std::string> lines_;
  std::size_t line_ = 0;
  std::string key_;
  std::string value_;
};

inline std::string tensor_block(const Eigen::Matrix3d& m) {
  std::string s;
  for (int i = 0; i < 3; ++i) {
    s += "  " + fmt(m(i, 0)) + " " + fmt(m(i, 1)) + " " + fmt(m(i, 2)) + "\n";
  }
  return s;
}

inline const char* ou_scheme_name(OuScheme s) {
  switch (s) {
    case OuScheme::exact: return "exact";
    case OuScheme::midpoint: return "midpoint";
    case OuScheme::as_printed: return "as_printed";
  }
  return "exact";
}

}  // namespace detail

/// Parses config text; `source` names it in error messages.
inline SimulationConfig parse_config_string(const std::string& text, const std::string& source = "<config>") {
  return detail::ConfigReader(text, source).parse();
}

inline SimulationConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str(), path);
}

/// Writes every setting, defaults included, in canonical units. parse_config
/// of the result reproduces cfg exactly.
inline std::string emit_config(const SimulationConfig& cfg) {
  using detail::fmt;
  std::ostringstream o;
  const auto& s = cfg.system;
  auto vec = [](const Eigen::Vector3d& v) { return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z()); };
  o << "[system]\n";
  o << "field = " << vec(s.field) << " mT\n";
  o << "exchange = " << fmt(s.exchange) << " mT\n";
  o << "dipolar = mT\n" << detail::tensor_block(s.dipolar);
  o << "k_singlet = " << fmt(s.k_singlet) << " /ns\n";
  o << "k_triplet = " << fmt(s.k_triplet) << " /ns\n";
  o << "k_free = " << fmt(s.k_free) << " /ns\n";
  const auto& q = cfg.orientation;
  o << "orientation = " << fmt(q.w()) << " " << fmt(q.x()) << " " << fmt(q.y()) << " " << fmt(q.z()) << "\n";
  o << "dimension_budget = " << cfg.dimension_budget << "\n";
  for (int r = 0; r < 2; ++r) {
    o << "\n[radical" << r + 1 << "]\n";
    o << "g =\n" << detail::tensor_block(s.radicals[static_cast<std::size_t>(r)].g);
  }
  for (int r = 0; r < 2; ++r) {
    for (const auto& n : s.radicals[static_cast<std::size_t>(r)].nuclei) {
      o << "\n[nucleus radical" << r + 1 << " " << n.label << "]\n";
      o << "spin = " << fmt(n.spin()) << "\n";
      o << "hyperfine = mT\n" << detail::tensor_block(n.hyperfine);
    }
  }
  const auto& nz = cfg.noise;
  if (nz.random_field) {
    o << "\n[random_field]\n";
    o << "tau = " << fmt(nz.rf_tau) << " ns\n";
    if (cfg.k_rf) {
      o << "k_rf = " << fmt(*cfg.k_rf) << " /ns\n";
    } else {
      o << "mean_square = " << fmt(nz.rf_mean_square) << " mT^2\n";
    }
    o << "scheme = " << detail::ou_scheme_name(nz.ou_scheme) << "\n";
  }
  if (nz.rotor) {
    o << "\n[rotor]\n";
    o << "diffusion = " << vec(nz.rotor_diffusion) << " /ns\n";
  }
  if (nz.two_site) {
    o << "\n[two_site]\n";
    o << "sigma_j = " << fmt(nz.sigma_j) << " mT\n";
    o << "tau_j = " << fmt(nz.tau_j) << " ns\n";
  }
  const auto& r = cfg.run;
  o << "\n[run]\n";
  o << "scheme = " << scheme_name(r.scheme) << "\n";
  o << "samples = " << r.samples << "\n";
  o << "seed = " << r.seed << "\n";
  o << "dt = " << fmt(r.dt) << " ns\n";
  o << "substeps = " << r.substeps << "\n";
  o << "horizon = " << fmt(r.horizon) << " ns\n";
  o << "survival_threshold = " << fmt(r.survival_threshold) << "\n";
  o << "record_stride = " << r.record_stride << "\n";
  o << "rescaled = " << (r.rescaled ? "true" : "false") << "\n";
  o << "krylov_dim = " << r.krylov_dim << "\n";
  o << "krylov_tol = " << fmt(r.krylov_tol) << "\n";
  o << "observables =";
  for (const auto& name : r.observables) o << " " << name;
  o << "\n";
  o << "\n[sweep]\n";
  if (!cfg.sweep.fields.empty()) {
    o << "fields =";
    for (double b : cfg.sweep.fields) o << " " << fmt(b);
    o << " mT\n";
  }
  o << "axis = " << vec(cfg.sweep.axis) << "\n";
  o << "samples = " << cfg.sweep.samples << "\n";
  o << "\n[output]\n";
  o << "directory = " << cfg.output.directory << "\n";
  o << "format = " << cfg.output.format << "\n";
  o << "prefix = " << cfg.output.prefix << "\n";
  return o.str();
}

/// Field-for-field equality, used by round-trip checks.
inline bool same_config(const SimulationConfig& a, const SimulationConfig& b) {
  return emit_config(a) == emit_config(b);
}

}  // namespace rpsse
