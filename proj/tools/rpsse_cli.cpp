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

// rpsse run|sweep <config> [--samples N] [--seed S] [--scheme suz|coherent|projection]
//                          [--threads T] [--output DIR] [--format csv|json]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "rpsse/harness/config.hpp"
#include "rpsse/harness/ensemble.hpp"
#include "rpsse/harness/output.hpp"
#include "rpsse/harness/yields.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Overrides {
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::string> output;
  std::optional<std::string> format;
  unsigned threads = 0;
  bool quiet = false;
};

void apply(rpsse::SimulationConfig& cfg, const Overrides& o, bool sweep) {
  if (o.samples) (sweep ? cfg.sweep.samples : cfg.run.samples) = *o.samples;
  if (o.seed) cfg.run.seed = *o.seed;
  if (o.scheme) cfg.run.scheme = rpsse::parse_scheme(*o.scheme);
  if (o.output) cfg.output.directory = *o.output;
  if (o.format) cfg.output.format = *o.format;
  cfg.validate();
}

std::string out_path(const rpsse::SimulationConfig& cfg, const std::string& stem) {
  return (std::filesystem::path(cfg.output.directory) / (cfg.output.prefix + "_" + stem)).string();
}

rpsse::EnsembleOptions ensemble_options(const Overrides& o) {
  rpsse::EnsembleOptions opts;
  opts.threads = o.threads;
  if (!o.quiet) {
    opts.progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r  " << done << "/" << total << " trajectories" << (done == total ? "\n" : "") << std::flush;
    };
  }
  return opts;
}

void run_series(rpsse::SimulationConfig cfg, const Overrides& o) {
  apply(cfg, o, false);
  std::filesystem::create_directories(cfg.output.directory);
  const auto est = rpsse::run_ensemble(cfg, ensemble_options(o));
  std::string data_path;
  if (cfg.output.format == "csv") {
    std::ostringstream s;
    rpsse::write_series_csv(s, est);
    data_path = out_path(cfg, "series.csv");
    rpsse::write_text(data_path, s.str());
  } else {
    data_path = out_path(cfg, "series.json");
    rpsse::write_text(data_path, rpsse::series_json(est).dump(1) + "\n");
  }
  auto manifest = rpsse::manifest_json(cfg, "run", est.run_id, cfg.run.seed, cfg.run.samples);
  manifest["early_stops"] = est.early_stops;
  manifest["data"] = std::filesystem::path(data_path).filename().string();
  rpsse::write_text(out_path(cfg, "manifest.json"), manifest.dump(1) + "\n");
  std::cout << data_path << "\n";
}

void run_sweep(rpsse::SimulationConfig cfg, const Overrides& o) {
  apply(cfg, o, true);
  if (cfg.sweep.fields.empty()) throw rpsse::ConfigError("sweep: config has no [sweep] fields or range");
  std::filesystem::create_directories(cfg.output.directory);
  const auto res = rpsse::field_sweep(cfg, cfg.sweep.fields, ensemble_options(o));
  std::string data_path;
  if (cfg.output.format == "csv") {
    std::ostringstream s;
    rpsse::write_sweep_csv(s, res);
    data_path = out_path(cfg, "sweep.csv");
    rpsse::write_text(data_path, s.str());
  } else {
    data_path = out_path(cfg, "sweep.json");
    rpsse::write_text(data_path, rpsse::sweep_json(res).dump(1) + "\n");
  }
  auto manifest = rpsse::manifest_json(cfg, "sweep", res.run_id, cfg.run.seed, cfg.sweep.samples);
  manifest["relative_defined"] = res.relative_defined;
  manifest["data"] = std::filesystem::path(data_path).filename().string();
  rpsse::write_text(out_path(cfg, "manifest.json"), manifest.dump(1) + "\n");
  if (!res.relative_defined) std::cerr << "warning: zero-field triplet yield is 0; relative curve undefined\n";
  std::cout << data_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radical-pair spin dynamics by stochastic Schrodinger equation sampling"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Configuration file")->required();
    sub->add_option_function<std::size_t>("--samples", [&](const std::size_t& v) { o.samples = v; },
                                          "Monte Carlo samples (per field point for sweep)")
        ->check(CLI::PositiveNumber);
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "Master seed");
    sub->add_option_function<std::string>("--scheme", [&](const std::string& v) { o.scheme = v; },
                                          "Nuclear sampling scheme")
        ->check(CLI::IsMember({"suz", "coherent", "projection"}));
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option_function<std::string>("--output", [&](const std::string& v) { o.output = v; },
                                          "Output directory");
    sub->add_option_function<std::string>("--format", [&](const std::string& v) { o.format = v; }, "Data format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--quiet", o.quiet, "No progress on stderr");
  };
  auto* run = app.add_subcommand("run", "Time series of ensemble-averaged observables");
  auto* sweep = app.add_subcommand("sweep", "Triplet yields and recombination rates over applied fields");
  add_common(run);
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const auto cfg = rpsse::parse_config(config_path);
    if (run->parsed()) run_series(cfg, o);
    if (sweep->parsed()) run_sweep(cfg, o);
  } catch (const rpsse::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rpsse::CapacityError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rpsse::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
