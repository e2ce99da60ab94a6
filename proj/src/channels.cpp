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

#include "spinctrl/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace spinctrl {

bool ChoiMatrix::is_valid_state(double tol) const {
  return matrix.rows() == Eigen::Index(system_dim) * system_dim &&
         is_positive_semidefinite(matrix, tol) && std::abs(matrix.trace() - 1.0) <= tol;
}

ChoiMatrix choi_of_unitary(const ComplexMatrix& u) {
  if (!is_unitary(u, 1e-8)) throw std::invalid_argument("choi_of_unitary: input is not unitary");
  const Eigen::Index n = u.rows();
  // |v> = n^{-1/2} sum_i U|i> (x) |i>, J = |v><v|.
  ComplexVector v = ComplexVector::Zero(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index i = 0; i < n; ++i) v[a * n + i] = u(a, i);
  v /= std::sqrt(static_cast<double>(n));
  return {static_cast<int>(n), v * v.adjoint()};
}

ChoiMatrix choi_of_dilation(const ComplexMatrix& u_ext) {
  if (!is_unitary(u_ext, 1e-8)) throw std::invalid_argument("choi_of_dilation: input is not unitary");
  if (u_ext.rows() % 2 != 0) throw std::invalid_argument("choi_of_dilation: odd dimension");
  const Eigen::Index n = u_ext.rows() / 2;
  // U(|i> (x) |0>) is column 2i; split it into its two environment branches.
  ComplexMatrix branch0(n, n), branch1(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index a = 0; a < n; ++a) {
      branch0(a, i) = u_ext(2 * a, 2 * i);
      branch1(a, i) = u_ext(2 * a + 1, 2 * i);
    }
  }
  ComplexMatrix j = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      // Phi(|i><k|) = sum_e K_e |i><k| K_e^dagger
      const ComplexMatrix image = branch0.col(i) * branch0.col(k).adjoint() +
                                  branch1.col(i) * branch1.col(k).adjoint();
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) j(a * n + i, b * n + k) = image(a, b);
    }
  }
  j /= static_cast<double>(n);
  return {static_cast<int>(n), std::move(j)};
}

ChoiMatrix choi_of_env_channel(const ChainSpec& spec, const ControlSequence& seq) {
  return choi_of_dilation(propagate_with_env(spec, seq));
}

double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b) {
  if (a.system_dim != b.system_dim || a.matrix.rows() != b.matrix.rows())
    throw std::invalid_argument("choi_distance: dimension mismatch");
  return trace_norm(a.matrix - b.matrix);
}

std::pair<double, double> target_distances(const ChainSpec& spec, const TargetGate& target,
                                           const ControlSequence& seq) {
  ChainSpec env_spec = spec;
  env_spec.env_enabled = true;
  const ChoiMatrix reference = choi_of_unitary(target_unitary(target));
  const double no_env = choi_distance(reference, choi_of_unitary(propagate(spec, seq)));
  const double env = choi_distance(reference, choi_of_env_channel(env_spec, seq));
  return {no_env, env};
}

RobustnessRun robustness_experiment(const TargetGate& target, double mu_constrained,
                                    const ChainSpec& spec, const ControlSequence& seq_template,
                                    const ObjectiveConfig& obj_cfg,
                                    const OptimizerConfig& opt_cfg) {
  ObjectiveConfig unconstrained_cfg = obj_cfg;
  unconstrained_cfg.mu = 1.0;
  ObjectiveConfig constrained_cfg = obj_cfg;
  constrained_cfg.mu = mu_constrained;
  constrained_cfg.validate();

  RobustnessRun run;
  run.unconstrained = optimize_controls(spec, target, seq_template, unconstrained_cfg, opt_cfg);
  run.constrained = optimize_controls(spec, target, seq_template, constrained_cfg, opt_cfg);

  auto& report = run.report;
  report.target = target;
  report.mu_used = mu_constrained;
  report.gamma = spec.gamma;
  std::tie(report.dist_no_env_mu1, report.dist_env_mu1) =
      target_distances(spec, target, run.unconstrained.best_seq);
  std::tie(report.dist_no_env_muL, report.dist_env_muL) =
      target_distances(spec, target, run.constrained.best_seq);
  return run;
}

}  // namespace spinctrl
