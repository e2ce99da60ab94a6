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

#ifndef SPINCTRL_OBJECTIVE_HPP_
#define SPINCTRL_OBJECTIVE_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "spinctrl/linalg.hpp"
#include "spinctrl/model.hpp"

namespace spinctrl {

/// Stand-ins for d|x|/dx used by the penalty gradient.
enum class Surrogate { Signum, Fractional, FermiDirac };

std::string to_string(Surrogate s);
std::optional<Surrogate> parse_surrogate(std::string_view name);

struct ObjectiveConfig {
  double mu = 0.2;  // weight of fidelity in G
  Surrogate surrogate = Surrogate::FermiDirac;
  double alpha = 0.99;
  double kT = 0.01;
  double grad_phase_epsilon = 1e-12;

  void validate() const;
};

/// |Tr(U_T^dagger U)| / dim.
double fidelity(const ComplexMatrix& target, const ComplexMatrix& u);

/// L1 norm of both pulse directions over 2 n b, so P lies in [0, 1].
double penalty(const ControlSequence& seq);

/// G = (1 - mu) P - mu F.
double functional_G(const ChainSpec& spec, const ControlSequence& seq, const TargetGate& target,
                    const ObjectiveConfig& cfg);

double surrogate_abs_derivative(double x, const ObjectiveConfig& cfg);

/// Antiderivative of surrogate_abs_derivative with value 0 at x = 0:
///   signum       |x|
///   fractional   |x|^(2-alpha) / Gamma(3-alpha)
///   fermi_dirac  2 kT log cosh(x / 2kT)
/// Each tends to |x| in the limit alpha -> 1 or kT -> 0.
double surrogate_abs_potential(double x, const ObjectiveConfig& cfg);

/// Penalty with |x| replaced by surrogate_abs_potential.
double surrogate_penalty(const ControlSequence& seq, const ObjectiveConfig& cfg);

/// (1 - mu) surrogate_penalty - mu F. gradient_G is the exact gradient of this
/// function; for the signum surrogate it coincides with G.
double surrogate_functional(const ChainSpec& spec, const ControlSequence& seq,
                            const TargetGate& target, const ObjectiveConfig& cfg);

/// [dG/dhx_1..n, dG/dhy_1..n] with the surrogate in the penalty term and the
/// exact fidelity derivative through each slice's spectral decomposition.
RealVector gradient_G(const ChainSpec& spec, const ControlSequence& seq, const TargetGate& target,
                      const ObjectiveConfig& cfg);

struct Evaluation {
  double fidelity = 0;
  double penalty = 0;
  double G = 0;
  double surrogate_G = 0;
  RealVector gradient;
};

/// Single forward/backward sweep producing every quantity above.
Evaluation evaluate(const ChainSpec& spec, const ControlSequence& seq, const TargetGate& target,
                    const ObjectiveConfig& cfg, bool with_gradient = true);

}  // namespace spinctrl

#endif  // SPINCTRL_OBJECTIVE_HPP_
