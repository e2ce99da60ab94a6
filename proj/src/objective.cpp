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

#include "spinctrl/objective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spinctrl {

namespace {

double sgn(double x) { return static_cast<double>((x > 0) - (x < 0)); }

// Divided-difference kernel of f(w) = exp(-i dt w):
//   (f(a) - f(b)) / (a - b) = -i dt exp(-i dt (a+b)/2) sinc(dt (a-b)/2),
// which stays accurate through degenerate eigenvalues.
ComplexMatrix expm_derivative_kernel(const RealVector& w, double dt) {
  const Eigen::Index d = w.size();
  ComplexMatrix kernel(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l < d; ++l) {
      const double half_gap = 0.5 * dt * (w[k] - w[l]);
      const double sinc = std::abs(half_gap) < 1e-8 ? 1.0 - half_gap * half_gap / 6.0
                                                    : std::sin(half_gap) / half_gap;
      kernel(k, l) = std::complex<double>(0, -dt) *
                     std::exp(std::complex<double>(0, -0.5 * dt * (w[k] + w[l]))) * sinc;
    }
  }
  return kernel;
}

}  // namespace

std::string to_string(Surrogate s) {
  switch (s) {
    case Surrogate::Signum: return "signum";
    case Surrogate::Fractional: return "fractional";
    case Surrogate::FermiDirac: return "fermi_dirac";
  }
  return "unknown";
}

std::optional<Surrogate> parse_surrogate(std::string_view name) {
  if (name == "signum") return Surrogate::Signum;
  if (name == "fractional") return Surrogate::Fractional;
  if (name == "fermi_dirac" || name == "fermi-dirac") return Surrogate::FermiDirac;
  return std::nullopt;
}

void ObjectiveConfig::validate() const {
  if (!(mu >= 0 && mu <= 1)) throw std::invalid_argument("ObjectiveConfig: mu must lie in [0, 1]");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("ObjectiveConfig: alpha must lie in (0, 1)");
  if (!(kT > 0)) throw std::invalid_argument("ObjectiveConfig: kT must be > 0");
  if (!(grad_phase_epsilon >= 0))
    throw std::invalid_argument("ObjectiveConfig: grad_phase_epsilon must be >= 0");
}

double fidelity(const ComplexMatrix& target, const ComplexMatrix& u) {
  if (target.rows() != u.rows() || target.cols() != u.cols() || u.rows() != u.cols())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const std::complex<double> z = (target.adjoint() * u).trace();
  return std::abs(z) / static_cast<double>(u.rows());
}

double penalty(const ControlSequence& seq) {
  seq.validate();
  return (seq.hx.cwiseAbs().sum() + seq.hy.cwiseAbs().sum()) / (2.0 * seq.slices() * seq.bound);
}

double surrogate_abs_derivative(double x, const ObjectiveConfig& cfg) {
  switch (cfg.surrogate) {
    case Surrogate::Signum:
      return sgn(x);
    case Surrogate::Fractional:
      // Gamma(2) = 1.
      return sgn(x) * std::pow(std::abs(x), 1.0 - cfg.alpha) / std::tgamma(2.0 - cfg.alpha);
    case Surrogate::FermiDirac:
      return 2.0 * (0.5 - 1.0 / (std::exp(x / cfg.kT) + 1.0));
  }
  return 0.0;
}

double surrogate_abs_potential(double x, const ObjectiveConfig& cfg) {
  const double ax = std::abs(x);
  switch (cfg.surrogate) {
    case Surrogate::Signum:
      return ax;
    case Surrogate::Fractional:
      return std::pow(ax, 2.0 - cfg.alpha) / std::tgamma(3.0 - cfg.alpha);
    case Surrogate::FermiDirac:
      // 2kT log cosh(x/2kT) written without overflow.
      return ax + 2.0 * cfg.kT * (std::log1p(std::exp(-ax / cfg.kT)) - std::numbers::ln2);
  }
  return 0.0;
}

double surrogate_penalty(const ControlSequence& seq, const ObjectiveConfig& cfg) {
  seq.validate();
  double sum = 0.0;
  for (int j = 0; j < seq.slices(); ++j)
    sum += surrogate_abs_potential(seq.hx[j], cfg) + surrogate_abs_potential(seq.hy[j], cfg);
  return sum / (2.0 * seq.slices() * seq.bound);
}

Evaluation evaluate(const ChainSpec& spec, const ControlSequence& seq, const TargetGate& target,
                    const ObjectiveConfig& cfg, bool with_gradient) {
  spec.validate();
  seq.validate();
  cfg.validate();
  target.validate();
  if (target.qubits != spec.qubits)
    throw std::invalid_argument("evaluate: target and chain have different qubit counts");

  const int n = seq.slices();
  const Eigen::Index dim = spec.dim();
  const ComplexMatrix h0 = drift_hamiltonian(spec);
  const ComplexMatrix sx = embed_single_site(pauli(Axis::X), 1, spec.qubits);
  const ComplexMatrix sy = embed_single_site(pauli(Axis::Y), 1, spec.qubits);
  const ComplexMatrix target_dag = target_unitary(target).adjoint();

  std::vector<HermitianEigen<double>> eig;
  std::vector<ComplexMatrix> slice_u;
  std::vector<ComplexMatrix> forward;  // forward[j] = U_j ... U_1, forward[0] = I
  eig.reserve(n);
  slice_u.reserve(n);
  forward.reserve(n + 1);
  forward.push_back(ComplexMatrix::Identity(dim, dim));
  for (int j = 0; j < n; ++j) {
    eig.push_back(hermitian_eigen(ComplexMatrix(h0 + seq.hx[j] * sx + seq.hy[j] * sy)));
    const auto& e = eig.back();
    const ComplexVector phases =
        e.values.unaryExpr([&](double w) { return std::exp(std::complex<double>(0, -seq.dt * w)); });
    slice_u.push_back(e.vectors * phases.asDiagonal() * e.vectors.adjoint());
    forward.push_back(slice_u.back() * forward.back());
  }

  const std::complex<double> z = (target_dag * forward.back()).trace();
  const double abs_z = std::abs(z);

  Evaluation out;
  out.fidelity = abs_z / static_cast<double>(dim);
  out.penalty = penalty(seq);
  out.G = (1.0 - cfg.mu) * out.penalty - cfg.mu * out.fidelity;
  out.surrogate_G = (1.0 - cfg.mu) * surrogate_penalty(seq, cfg) - cfg.mu * out.fidelity;
  if (!with_gradient) return out;

  const double penalty_scale = (1.0 - cfg.mu) / (2.0 * n * seq.bound);
  out.gradient.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    out.gradient[j] = penalty_scale * surrogate_abs_derivative(seq.hx[j], cfg);
    out.gradient[n + j] = penalty_scale * surrogate_abs_derivative(seq.hy[j], cfg);
  }
  if (cfg.mu == 0.0 || abs_z < cfg.grad_phase_epsilon) return out;

  // dTr(W U)/dh_j = Tr(M_j dU_j) with M_j = forward[j-1] W backward_j and
  // backward_j = U_n ... U_{j+1}.
  const double fid_scale = -cfg.mu / (abs_z * static_cast<double>(dim));
  ComplexMatrix backward = ComplexMatrix::Identity(dim, dim);
  for (int j = n - 1; j >= 0; --j) {
    const auto& e = eig[j];
    const ComplexMatrix m = forward[j] * target_dag * backward;
    const ComplexMatrix m_eig = e.vectors.adjoint() * m * e.vectors;
    const ComplexMatrix kernel = expm_derivative_kernel(e.values, seq.dt);
    const auto directional = [&](const ComplexMatrix& dh) {
      const ComplexMatrix k = e.vectors.adjoint() * dh * e.vectors;
      // Tr(m_eig (kernel o k)) = sum_kl m_eig(l,k) kernel(k,l) k(k,l)
      const std::complex<double> tr = (m_eig.transpose().array() * kernel.array() * k.array()).sum();
      return (std::conj(z) * tr).real();
    };
    out.gradient[j] += fid_scale * directional(sx);
    out.gradient[n + j] += fid_scale * directional(sy);
    backward = backward * slice_u[j];
  }
  return out;
}

double functional_G(const ChainSpec& spec, const ControlSequence& seq, const TargetGate& target,
                    const ObjectiveConfig& cfg) {
  return evaluate(spec, seq, target, cfg, false).G;
}

double surrogate_functional(const ChainSpec& spec, const ControlSequence& seq,
                            const TargetGate& target, const ObjectiveConfig& cfg) {
  return evaluate(spec, seq, target, cfg, false).surrogate_G;
}

RealVector gradient_G(const ChainSpec& spec, const ControlSequence& seq, const TargetGate& target,
                      const ObjectiveConfig& cfg) {
  return evaluate(spec, seq, target, cfg, true).gradient;
}

}  // namespace spinctrl
