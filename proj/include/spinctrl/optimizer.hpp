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

#ifndef SPINCTRL_OPTIMIZER_HPP_
#define SPINCTRL_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "spinctrl/linalg.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/objective.hpp"

namespace spinctrl {

struct OptimizerConfig {
  int max_iters = 5000;
  double grad_tol = 1e-6;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int restarts = 8;
  double init_amplitude = 0.5;
  std::uint64_t seed = 1;
  /// Worker threads for restarts; 0 picks the hardware concurrency.
  unsigned threads = 0;

  void validate(double bound) const;
};

/// Value and gradient at one point.
struct ValueGrad {
  double value = 0;
  RealVector gradient;
};

using ObjectiveFn = std::function<double(const RealVector&)>;
using GradientFn = std::function<RealVector(const RealVector&)>;
using ValueGradFn = std::function<ValueGrad(const RealVector&)>;
/// Called once per accepted iterate (including the start point).
using IterateCallback = std::function<void(const RealVector& x, double value)>;

struct BfgsIteration {
  double value = 0;
  double projected_grad_norm = 0;  // infinity norm
  double step = 0;
  bool hessian_reset = false;
  bool bound_activated = false;
};

struct BfgsResult {
  RealVector x;
  double value = 0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::vector<BfgsIteration> trace;
};

/// Box-constrained BFGS: minimizes over |x_i| <= bound with a strong-Wolfe
/// line search whose step is capped at the box boundary. Coordinates pinned
/// at a bound with the gradient pushing outward are frozen for the step. The
/// inverse Hessian restarts from the identity whenever s'y <= 1e-12 or a step
/// lands on a new bound.
BfgsResult bfgs_minimize(const ValueGradFn& fn, const RealVector& x0, double bound,
                         const OptimizerConfig& cfg, const IterateCallback& on_iterate = {});

BfgsResult bfgs_minimize(const ObjectiveFn& objective, const GradientFn& gradient,
                         const RealVector& x0, double bound, const OptimizerConfig& cfg,
                         const IterateCallback& on_iterate = {});

struct TraceEntry {
  double objective = 0;  // the minimized surrogate functional
  double G = 0;
  double fidelity = 0;
  double penalty = 0;
};

struct OptimizationResult {
  ControlSequence best_seq;
  double fidelity = 0;
  double penalty = 0;
  double G = 0;
  int iterations_used = 0;
  int restart_index = 0;
  std::uint64_t seed = 0;       // master seed
  std::uint64_t restart_seed = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::vector<TraceEntry> trace;
};

/// Seed of restart `index` derived from the master seed.
std::uint64_t restart_seed(std::uint64_t seed, int index);

/// Uniform(-amplitude, amplitude) initial pulses for one restart.
ControlSequence random_initial_sequence(const ControlSequence& tmpl, double amplitude,
                                        std::uint64_t seed);

/// Runs cfg.restarts independent BFGS minimizations of surrogate_functional
/// and keeps the lowest final G (ties to the lower restart index).
OptimizationResult optimize_controls(const ChainSpec& spec, const TargetGate& target,
                                     const ControlSequence& seq_template,
                                     const ObjectiveConfig& obj_cfg,
                                     const OptimizerConfig& opt_cfg);

/// One restart from an explicit initial sequence.
OptimizationResult optimize_from(const ChainSpec& spec, const TargetGate& target,
                                 const ControlSequence& initial, const ObjectiveConfig& obj_cfg,
                                 const OptimizerConfig& opt_cfg);

}  // namespace spinctrl

#endif  // SPINCTRL_OPTIMIZER_HPP_
