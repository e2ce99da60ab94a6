/* Copyright 2026 The spinctrl Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// spinctrl run|robustness [flags]
//
// Sparse-pulse optimal control of Heisenberg spin chains. Flags override
// values from --config <file.json>, which override per-target defaults.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinctrl/experiment.hpp"

namespace {

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::string> target;
  std::optional<int> n_pulses;
  std::optional<double> dt;
  std::optional<double> mu;
  std::optional<double> bound;
  std::optional<std::string> surrogate;
  std::optional<double> alpha;
  std::optional<double> kT;
  std::optional<double> gamma;
  std::optional<double> coupling;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> max_iters;
  std::optional<double> grad_tol;
  std::optional<double> init_amplitude;
  std::optional<unsigned> threads;
  std::optional<std::string> initial_state;
  std::optional<double> min_fidelity;
  bool record_wall_time = false;
  std::optional<std::string> output_dir;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_file, "JSON file with configuration keys (flags win)");
  cmd.add_option("--target", f.target, "not3 | not4 | swap3 | swap4");
  cmd.add_option("--n-pulses", f.n_pulses, "pulses per control direction");
  cmd.add_option("--dt", f.dt, "slice duration in units of 1/J");
  cmd.add_option("--mu", f.mu, "fidelity weight in G = (1-mu) P - mu F");
  cmd.add_option("--bound", f.bound, "maximal pulse amplitude b");
  cmd.add_option("--surrogate", f.surrogate, "signum | fractional | fermi_dirac");
  cmd.add_option("--alpha", f.alpha, "fractional derivative order");
  cmd.add_option("--kT,--kt", f.kT, "Fermi-Dirac temperature");
  cmd.add_option("--gamma", f.gamma, "environment coupling strength");
  cmd.add_option("--coupling", f.coupling, "Heisenberg coupling J");
  cmd.add_option("--seed", f.seed, "master RNG seed");
  cmd.add_option("--restarts", f.restarts, "independent BFGS restarts");
  cmd.add_option("--max-iters", f.max_iters, "BFGS iteration cap per restart");
  cmd.add_option("--grad-tol", f.grad_tol, "projected-gradient infinity-norm tolerance");
  cmd.add_option("--init-amplitude", f.init_amplitude, "half-width of the uniform initial pulses");
  cmd.add_option("--threads", f.threads, "restart worker threads (0 = all cores)");
  cmd.add_option("--initial-state", f.initial_state, "basis state for trajectories.csv, e.g. 000");
  cmd.add_option("--min-fidelity", f.min_fidelity, "exit 3 when the final fidelity is lower");
  cmd.add_flag("--record-wall-time", f.record_wall_time, "store wall_seconds in the JSON output");
  cmd.add_option("--output-dir", f.output_dir, "directory for output files");
}

nlohmann::json flags_json(const Flags& f) {
  nlohmann::json j = nlohmann::json::object();
  const auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("target", f.target);
  put("n_pulses", f.n_pulses);
  put("dt", f.dt);
  put("mu", f.mu);
  put("bound", f.bound);
  put("surrogate", f.surrogate);
  put("alpha", f.alpha);
  put("kT", f.kT);
  put("gamma", f.gamma);
  put("coupling", f.coupling);
  put("seed", f.seed);
  put("restarts", f.restarts);
  put("max_iters", f.max_iters);
  put("grad_tol", f.grad_tol);
  put("init_amplitude", f.init_amplitude);
  put("threads", f.threads);
  put("initial_state", f.initial_state);
  put("min_fidelity", f.min_fidelity);
  if (f.record_wall_time) j["record_wall_time"] = true;
  put("output_dir", f.output_dir);
  return j;
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw spinctrl::ConfigError("cannot read config file " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw spinctrl::ConfigError("config file " + path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-pulse optimal control for Heisenberg spin chains"};
  app.require_subcommand(1);
  Flags run_flags, robustness_flags;
  CLI::App* run = app.add_subcommand("run", "optimize pulses; writes result.json, pulses.csv, trajectories.csv");
  CLI::App* robustness = app.add_subcommand("robustness", "mu=1 vs mu<1 Choi distances; writes robustness.json");
  add_flags(*run, run_flags);
  add_flags(*robustness, robustness_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return spinctrl::kExitBadConfig;
  }

  const bool is_run = run->parsed();
  const Flags& flags = is_run ? run_flags : robustness_flags;
  const auto command = is_run ? spinctrl::Command::Run : spinctrl::Command::Robustness;

  spinctrl::ExperimentConfig cfg;
  try {
    const nlohmann::json file = flags.config_file ? read_config_file(*flags.config_file) : nlohmann::json();
    cfg = spinctrl::resolve_config(command, file, flags_json(flags));
  } catch (const spinctrl::ConfigError& e) {
    std::cerr << "spinctrl: invalid configuration: " << e.what() << "\n";
    return spinctrl::kExitBadConfig;
  }

  try {
    return is_run ? spinctrl::run_optimize(cfg, std::cout) : spinctrl::run_robustness(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "spinctrl: " << e.what() << "\n";
    return 1;
  }
}
