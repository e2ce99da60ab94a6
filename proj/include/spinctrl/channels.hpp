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

#ifndef SPINCTRL_CHANNELS_HPP_
#define SPINCTRL_CHANNELS_HPP_

#include "spinctrl/linalg.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/objective.hpp"
#include "spinctrl/optimizer.hpp"

namespace spinctrl {

/// Normalized Choi-Jamiolkowski state (1/n) sum_ij Phi(|i><j|) (x) |i><j|,
/// output factor first. Trace one for trace-preserving channels.
struct ChoiMatrix {
  int system_dim = 0;
  ComplexMatrix matrix;

  /// Hermitian, PSD and unit trace, all within tol.
  bool is_valid_state(double tol = 1e-9) const;
};

ChoiMatrix choi_of_unitary(const ComplexMatrix& u);

/// Channel rho -> Tr_env[U (rho (x) |0><0|) U^dagger] for a unitary on system
/// (x) one environment qubit, built one matrix unit at a time.
ChoiMatrix choi_of_dilation(const ComplexMatrix& u_ext);

ChoiMatrix choi_of_env_channel(const ChainSpec& spec, const ControlSequence& seq);

/// Trace norm of the difference; lies in [0, 2].
double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b);

struct RobustnessReport {
  TargetGate target;
  double mu_used = 0;
  double gamma = 0;
  double dist_no_env_mu1 = 0;
  double dist_no_env_muL = 0;
  double dist_env_mu1 = 0;
  double dist_env_muL = 0;
};

/// Distances of the env-free and env-coupled channels of `seq` from the
/// target gate, as a (no_env, env) pair.
std::pair<double, double> target_distances(const ChainSpec& spec, const TargetGate& target,
                                           const ControlSequence& seq);

struct RobustnessRun {
  RobustnessReport report;
  OptimizationResult unconstrained;  // mu = 1
  OptimizationResult constrained;    // mu = mu_constrained
};

/// Optimizes once with mu = 1 and once with mu = mu_constrained, then scores
/// both pulse sets with and without the environment qubit. `spec` supplies
/// gamma; its env_enabled flag is ignored.
RobustnessRun robustness_experiment(const TargetGate& target, double mu_constrained,
                                    const ChainSpec& spec, const ControlSequence& seq_template,
                                    const ObjectiveConfig& obj_cfg,
                                    const OptimizerConfig& opt_cfg);

}  // namespace spinctrl

#endif  // SPINCTRL_CHANNELS_HPP_
