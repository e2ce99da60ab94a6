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

#ifndef SPINCTRL_MODEL_HPP_
#define SPINCTRL_MODEL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "spinctrl/linalg.hpp"

namespace spinctrl {

/// Isotropic Heisenberg chain controlled through the first spin, optionally
/// extended by one environment qubit appended after site N.
struct ChainSpec {
  int qubits = 1;
  double coupling = 1.0;
  bool env_enabled = false;
  double gamma = 0.1;

  int dim() const { return 1 << qubits; }
  void validate() const;
};

/// Piecewise-constant pulses: slice j holds (hx[j], hy[j]) for a duration dt.
struct ControlSequence {
  double dt = 0.2;
  double bound = 10.0;
  RealVector hx;
  RealVector hy;

  static ControlSequence zeros(int slices, double dt, double bound);
  /// Inverse of packed(): first half hx, second half hy.
  static ControlSequence from_packed(const RealVector& packed, double dt, double bound);

  int slices() const { return static_cast<int>(hx.size()); }
  RealVector packed() const;
  /// Structural checks (sizes, dt, bound) plus the amplitude box.
  void validate() const;
};

enum class GateKind { Not, Swap };

struct TargetGate {
  GateKind kind = GateKind::Not;
  int qubits = 1;

  void validate() const;
  std::string name() const;
};

ComplexMatrix drift_hamiltonian(const ChainSpec& spec);
ComplexMatrix control_hamiltonian(double hx, double hy, int qubits);

/// H0 + Hc on the extended space plus the pulse-proportional Heisenberg
/// coupling of every chain site to the environment qubit.
ComplexMatrix env_hamiltonian(const ChainSpec& spec, double hx, double hy);

/// Time-ordered product U_n ... U_1 of slice propagators exp(-i dt (drift + Hc_j)).
ComplexMatrix propagate(const ComplexMatrix& drift, const ControlSequence& seq, int qubits);
ComplexMatrix propagate(const ChainSpec& spec, const ControlSequence& seq);
ComplexMatrix propagate_with_env(const ChainSpec& spec, const ControlSequence& seq);

ComplexMatrix target_unitary(const TargetGate& target);

/// Bloch vectors of every qubit's reduced state sampled at the n+1 slice
/// boundaries. points[j][i] belongs to time times[j] and qubit i+1.
struct BlochTrajectories {
  std::vector<double> times;
  std::vector<std::vector<Eigen::Vector3d>> points;
  std::vector<double> state_norms;
};

/// Parses a computational basis label such as "001" (qubit 1 leftmost).
int basis_index(std::string_view label, int qubits);

BlochTrajectories bloch_trajectories(const ChainSpec& spec, const ControlSequence& seq,
                                     std::string_view initial_state);

/// Reduced single-qubit density matrix of a pure state, qubit counted from 1.
ComplexMatrix reduced_qubit_state(const ComplexVector& psi, int qubit, int qubits);

}  // namespace spinctrl

#endif  // SPINCTRL_MODEL_HPP_
