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

#include "spinctrl/model.hpp"

#include <cmath>
#include <stdexcept>

namespace spinctrl {

namespace {

// Sx^a Sx^b + Sy^a Sy^b + Sz^a Sz^b on a chain of `sites` qubits.
ComplexMatrix heisenberg_bond(int a, int b, int sites) {
  const int dim = 1 << sites;
  ComplexMatrix bond = ComplexMatrix::Zero(dim, dim);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const ComplexMatrix s = pauli(axis);
    bond += embed_single_site(s, a, sites) * embed_single_site(s, b, sites);
  }
  return bond;
}

ComplexMatrix time_ordered_product(const ControlSequence& seq, int dim,
                                   const auto& slice_hamiltonian) {
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (int j = 0; j < seq.slices(); ++j) {
    const ComplexMatrix h = slice_hamiltonian(seq.hx[j], seq.hy[j]);
    u = expm_hermitian_times_minus_i(h, seq.dt) * u;
  }
  return u;
}

}  // namespace

void ChainSpec::validate() const {
  if (qubits < 1) throw std::invalid_argument("ChainSpec: qubit count must be >= 1");
  if (!(coupling > 0)) throw std::invalid_argument("ChainSpec: coupling J must be > 0");
  if (!(gamma >= 0)) throw std::invalid_argument("ChainSpec: gamma must be >= 0");
}

ControlSequence ControlSequence::zeros(int slices, double dt, double bound) {
  ControlSequence seq;
  seq.dt = dt;
  seq.bound = bound;
  seq.hx = RealVector::Zero(slices);
  seq.hy = RealVector::Zero(slices);
  return seq;
}

ControlSequence ControlSequence::from_packed(const RealVector& packed, double dt, double bound) {
  if (packed.size() % 2 != 0)
    throw std::invalid_argument("ControlSequence: packed vector must have even length");
  const Eigen::Index n = packed.size() / 2;
  ControlSequence seq;
  seq.dt = dt;
  seq.bound = bound;
  seq.hx = packed.head(n);
  seq.hy = packed.tail(n);
  return seq;
}

RealVector ControlSequence::packed() const {
  RealVector out(hx.size() + hy.size());
  out << hx, hy;
  return out;
}

void ControlSequence::validate() const {
  if (hx.size() < 1 || hx.size() != hy.size())
    throw std::invalid_argument("ControlSequence: hx and hy must be non-empty and equally long");
  if (!(dt > 0)) throw std::invalid_argument("ControlSequence: dt must be > 0");
  if (!(bound > 0)) throw std::invalid_argument("ControlSequence: bound must be > 0");
  if (!hx.allFinite() || !hy.allFinite())
    throw std::invalid_argument("ControlSequence: non-finite pulse amplitude");
  if (hx.cwiseAbs().maxCoeff() > bound || hy.cwiseAbs().maxCoeff() > bound)
    throw std::invalid_argument("ControlSequence: pulse amplitude exceeds bound");
}

void TargetGate::validate() const {
  if (kind == GateKind::Not && qubits < 1)
    throw std::invalid_argument("TargetGate: NOT needs at least one qubit");
  if (kind == GateKind::Swap && qubits < 2)
    throw std::invalid_argument("TargetGate: SWAP needs at least two qubits");
}

std::string TargetGate::name() const {
  return (kind == GateKind::Not ? "not" : "swap") + std::to_string(qubits);
}

ComplexMatrix drift_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  ComplexMatrix h0 = ComplexMatrix::Zero(spec.dim(), spec.dim());
  for (int i = 1; i < spec.qubits; ++i) h0 += heisenberg_bond(i, i + 1, spec.qubits);
  return spec.coupling * h0;
}

ComplexMatrix control_hamiltonian(double hx, double hy, int qubits) {
  return hx * embed_single_site(pauli(Axis::X), 1, qubits) +
         hy * embed_single_site(pauli(Axis::Y), 1, qubits);
}

ComplexMatrix env_hamiltonian(const ChainSpec& spec, double hx, double hy) {
  spec.validate();
  if (!spec.env_enabled) throw std::logic_error("env_hamiltonian: environment not enabled");
  const int sites = spec.qubits + 1;
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix h = kron(drift_hamiltonian(spec) + control_hamiltonian(hx, hy, spec.qubits), id2);
  const double strength = spec.gamma * (std::abs(hx) + std::abs(hy));
  if (strength != 0.0) {
    for (int i = 1; i <= spec.qubits; ++i) h += strength * heisenberg_bond(i, sites, sites);
  }
  return h;
}

ComplexMatrix propagate(const ComplexMatrix& drift, const ControlSequence& seq, int qubits) {
  if (drift.rows() != (Eigen::Index(1) << qubits))
    throw std::invalid_argument("propagate: drift dimension does not match qubit count");
  if (seq.hx.size() != seq.hy.size()) throw std::invalid_argument("propagate: ragged sequence");
  return time_ordered_product(seq, static_cast<int>(drift.rows()), [&](double hx, double hy) {
    return ComplexMatrix(drift + control_hamiltonian(hx, hy, qubits));
  });
}

ComplexMatrix propagate(const ChainSpec& spec, const ControlSequence& seq) {
  return propagate(drift_hamiltonian(spec), seq, spec.qubits);
}

ComplexMatrix propagate_with_env(const ChainSpec& spec, const ControlSequence& seq) {
  spec.validate();
  if (!spec.env_enabled) throw std::logic_error("propagate_with_env: environment not enabled");
  const int sites = spec.qubits + 1;
  const ComplexMatrix base = kron(drift_hamiltonian(spec), ComplexMatrix::Identity(2, 2));
  ComplexMatrix coupling = ComplexMatrix::Zero(base.rows(), base.cols());
  for (int i = 1; i <= spec.qubits; ++i) coupling += heisenberg_bond(i, sites, sites);
  const ComplexMatrix sx = embed_single_site(pauli(Axis::X), 1, sites);
  const ComplexMatrix sy = embed_single_site(pauli(Axis::Y), 1, sites);
  return time_ordered_product(seq, static_cast<int>(base.rows()), [&](double hx, double hy) {
    return ComplexMatrix(base + hx * sx + hy * sy +
                         spec.gamma * (std::abs(hx) + std::abs(hy)) * coupling);
  });
}

ComplexMatrix target_unitary(const TargetGate& target) {
  target.validate();
  if (target.kind == GateKind::Not) return embed_single_site(pauli(Axis::X), target.qubits, target.qubits);
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const Eigen::Index left = Eigen::Index(1) << (target.qubits - 2);
  return kron(ComplexMatrix::Identity(left, left), swap);
}

int basis_index(std::string_view label, int qubits) {
  if (static_cast<int>(label.size()) != qubits)
    throw std::invalid_argument("basis label '" + std::string(label) + "' must have " +
                                std::to_string(qubits) + " bits");
  int index = 0;
  for (char c : label) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("basis label '" + std::string(label) + "' is not a bit string");
    index = 2 * index + (c - '0');
  }
  return index;
}

ComplexMatrix reduced_qubit_state(const ComplexVector& psi, int qubit, int qubits) {
  const Eigen::Index dim = Eigen::Index(1) << qubits;
  if (psi.size() != dim) throw std::invalid_argument("reduced_qubit_state: state dimension mismatch");
  if (qubit < 1 || qubit > qubits) throw std::out_of_range("reduced_qubit_state: qubit out of range");
  const int shift = qubits - qubit;
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  for (Eigen::Index k = 0; k < dim; ++k) {
    if ((k >> shift) & 1) continue;
    const Eigen::Index k1 = k | (Eigen::Index(1) << shift);
    rho(0, 0) += std::norm(psi[k]);
    rho(1, 1) += std::norm(psi[k1]);
    rho(0, 1) += psi[k] * std::conj(psi[k1]);
  }
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

BlochTrajectories bloch_trajectories(const ChainSpec& spec, const ControlSequence& seq,
                                     std::string_view initial_state) {
  spec.validate();
  const int index = basis_index(initial_state, spec.qubits);
  const ComplexMatrix h0 = drift_hamiltonian(spec);
  ComplexVector psi = ComplexVector::Zero(spec.dim());
  psi[index] = 1.0;

  BlochTrajectories out;
  const auto record = [&](double t) {
    out.times.push_back(t);
    out.state_norms.push_back(psi.norm());
    std::vector<Eigen::Vector3d> row;
    row.reserve(spec.qubits);
    for (int q = 1; q <= spec.qubits; ++q) {
      const ComplexMatrix rho = reduced_qubit_state(psi, q, spec.qubits);
      // Tr(rho sigma) for each Pauli axis.
      row.emplace_back(2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
                       (rho(0, 0) - rho(1, 1)).real());
    }
    out.points.push_back(std::move(row));
  };

  record(0.0);
  for (int j = 0; j < seq.slices(); ++j) {
    const ComplexMatrix h = h0 + control_hamiltonian(seq.hx[j], seq.hy[j], spec.qubits);
    psi = expm_hermitian_times_minus_i(h, seq.dt) * psi;
    record((j + 1) * seq.dt);
  }
  return out;
}

}  // namespace spinctrl
