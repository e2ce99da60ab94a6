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

#ifndef SPINCTRL_EXPERIMENT_HPP_
#define SPINCTRL_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spinctrl/channels.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/objective.hpp"
#include "spinctrl/optimizer.hpp"

namespace spinctrl {

/// Raised for any malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Run, Robustness };

/// Everything one `spinctrl run` / `spinctrl robustness` invocation needs.
struct ExperimentConfig {
  std::string target = "not3";
  int n_pulses = 64;
  double dt = 0.2;
  double mu = 0.2;
  double bound = 100.0;
  Surrogate surrogate = Surrogate::Fractional;
  double alpha = 0.99;
  double kT = 0.01;
  double gamma = 0.1;
  double coupling = 1.0;
  std::uint64_t seed = 1;
  int restarts = 8;
  int max_iters = 5000;
  double grad_tol = 1e-6;
  double init_amplitude = 0.5;
  unsigned threads = 0;
  std::string initial_state = "000";
  std::optional<double> min_fidelity;
  bool record_wall_time = false;
  std::filesystem::path output_dir = ".";

  TargetGate target_gate() const;
  ChainSpec chain_spec() const;
  ControlSequence sequence_template() const;
  ObjectiveConfig objective_config() const;
  OptimizerConfig optimizer_config() const;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Target-dependent defaults: n = 64 and mu = 0.2 for three qubits,
/// n = 256 and mu = 0.4 for four; initial state |000> or |0010>.
nlohmann::json default_config_json(const std::string& target, Command command);

/// Layers defaults <- config file <- explicit flags (later wins) and converts.
/// `flags` holds only the options given on the command line.
ExperimentConfig resolve_config(Command command, const nlohmann::json& file_overrides,
                                const nlohmann::json& flags);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const ExperimentConfig& cfg, const OptimizationResult& result,
                              std::optional<double> wall_seconds);
nlohmann::json robustness_to_json(const ExperimentConfig& cfg, const RobustnessRun& run,
                                  std::optional<double> wall_seconds);

/// Header `index,t_start,hx,hy`.
void write_pulses_csv(std::ostream& os, const ControlSequence& seq);
/// Parses the pulses.csv layout; dt and bound are not stored in the file.
ControlSequence read_pulses_csv(std::istream& is, double dt, double bound);
/// Header `t,qubit,bx,by,bz`, qubits counted from 1.
void write_trajectories_csv(std::ostream& os, const BlochTrajectories& traj);

/// Exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitBelowMinFidelity = 3;

int run_optimize(const ExperimentConfig& cfg, std::ostream& log);
int run_robustness(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace spinctrl

#endif  // SPINCTRL_EXPERIMENT_HPP_
