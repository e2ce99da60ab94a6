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

#include <doctest.h>

#include <cstring>

#include "spinctrl/optimizer.hpp"
#include "test_support.hpp"

using namespace spinctrl;
using namespace spinctrl::testing;

namespace {

OptimizerConfig tight(int max_iters = 1000) {
  OptimizerConfig c;
  c.grad_tol = 1e-10;
  c.max_iters = max_iters;
  return c;
}

bool bitwise_equal(const RealVector& a, const RealVector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

}  // namespace

TEST_CASE("bfgs on an SPD quadratic") {
  std::mt19937_64 rng(1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 4);
  const Eigen::MatrixXd a = m * m.transpose() + Eigen::MatrixXd::Identity(4, 4);
  const RealVector c = (RealVector(4) << 0.5, -1.0, 2.0, 0.25).finished();
  const auto f = [&](const RealVector& x) { return (x - c).dot(a * (x - c)); };
  const auto g = [&](const RealVector& x) -> RealVector { return 2.0 * a * (x - c); };

  const BfgsResult r = bfgs_minimize(f, g, RealVector::Zero(4), 100.0, tight());
  CHECK(r.converged);
  CHECK(r.iterations <= 50);
  CHECK((r.x - c).cwiseAbs().maxCoeff() < 1e-8);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].value <= r.trace[i - 1].value);
}

TEST_CASE("bfgs on Rosenbrock") {
  const auto f = [](const RealVector& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto g = [](const RealVector& x) -> RealVector {
    return (RealVector(2) << -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]), 200 * (x[1] - x[0] * x[0]))
        .finished();
  };
  const BfgsResult r = bfgs_minimize(f, g, (RealVector(2) << -1.2, 1.0).finished(), 10.0, tight());
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-6);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-6);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].value <= r.trace[i - 1].value);
}

TEST_CASE("bfgs on |x| with the Fermi-Dirac gradient") {
  ObjectiveConfig c;
  c.surrogate = Surrogate::FermiDirac;
  const auto f = [](const RealVector& x) { return std::abs(x[0]); };
  const auto g = [&](const RealVector& x) -> RealVector {
    return RealVector::Constant(1, surrogate_abs_derivative(x[0], c));
  };
  const BfgsResult r = bfgs_minimize(f, g, RealVector::Constant(1, 0.7), 1.0, OptimizerConfig{});
  // The surrogate's only root is 0; a bisection on it lands there as well.
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (surrogate_abs_derivative(mid, c) > 0 ? hi : lo) = mid;
  }
  CHECK(std::abs(lo) < 1e-12);
  CHECK(std::abs(r.x[0] - lo) < 5 * c.kT);
}

TEST_CASE("bfgs respects the box") {
  const RealVector target = (RealVector(3) << 5.0, -0.2, -7.0).finished();
  const auto f = [&](const RealVector& x) { return (x - target).squaredNorm(); };
  const auto g = [&](const RealVector& x) -> RealVector { return 2.0 * (x - target); };
  const BfgsResult r = bfgs_minimize(f, g, RealVector::Zero(3), 1.0, tight());
  CHECK(r.converged);
  CHECK(r.x[0] == 1.0);
  CHECK(r.x[1] == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(r.x[2] == -1.0);
  bool saw_bound = false;
  for (const auto& it : r.trace) {
    if (it.bound_activated) {
      saw_bound = true;
      CHECK(it.hessian_reset);
    }
  }
  CHECK(saw_bound);

  CHECK_THROWS_AS(bfgs_minimize(f, g, RealVector::Constant(3, 2.0), 1.0, tight()), std::invalid_argument);
}

TEST_CASE("bfgs stops at max_iters") {
  const auto f = [](const RealVector& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto g = [](const RealVector& x) -> RealVector {
    return (RealVector(2) << -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]), 200 * (x[1] - x[0] * x[0]))
        .finished();
  };
  const BfgsResult r = bfgs_minimize(f, g, (RealVector(2) << -1.2, 1.0).finished(), 10.0, tight(3));
  CHECK(r.iterations <= 3);
  CHECK_FALSE(r.converged);
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate(10.0));
  c.wolfe_c1 = 0.95;
  CHECK_THROWS(c.validate(10.0));
  c = OptimizerConfig{};
  c.init_amplitude = 20;
  CHECK_THROWS(c.validate(10.0));
  c = OptimizerConfig{};
  c.restarts = 0;
  CHECK_THROWS(c.validate(10.0));
}

TEST_CASE("optimize_controls on a single qubit") {
  // No drift: the optimum puts all area on hx with sin(theta) = F and
  // cos(theta) = (1 - mu) / (mu 2 n b dt) from dG/dtheta = 0.
  const ChainSpec one{1, 1.0, false, 0.1};
  const TargetGate not1{GateKind::Not, 1};
  ObjectiveConfig obj;
  obj.mu = 0.5;
  obj.surrogate = Surrogate::FermiDirac;
  OptimizerConfig opt;
  opt.restarts = 4;
  opt.seed = 3;

  for (double b : {10.0, 100.0}) {
    const ControlSequence tmpl = ControlSequence::zeros(4, 0.2, b);
    const OptimizationResult r = optimize_controls(one, not1, tmpl, obj, opt);
    const double cos_theta = (1 - obj.mu) / (obj.mu * 2 * 4 * b * 0.2);
    const double expected = std::sqrt(1 - cos_theta * cos_theta);
    CHECK(r.fidelity == doctest::Approx(expected).epsilon(1e-6));
    if (b == 100.0) CHECK(r.fidelity > 0.9999);
    CHECK(r.best_seq.hx.cwiseAbs().maxCoeff() <= b);
    CHECK(std::abs(r.G - ((1 - obj.mu) * r.penalty - obj.mu * r.fidelity)) < 1e-12);
  }
}

TEST_CASE("optimize_controls is deterministic and feasible") {
  const ChainSpec spec{2, 1.0, false, 0.1};
  const TargetGate swap2{GateKind::Swap, 2};
  const ControlSequence tmpl = ControlSequence::zeros(16, 0.2, 2.0);
  ObjectiveConfig obj;
  obj.mu = 0.5;
  OptimizerConfig opt;
  opt.restarts = 3;
  opt.seed = 42;
  opt.max_iters = 300;
  opt.init_amplitude = 2.0;

  opt.threads = 1;
  const OptimizationResult a = optimize_controls(spec, swap2, tmpl, obj, opt);
  const OptimizationResult b = optimize_controls(spec, swap2, tmpl, obj, opt);
  opt.threads = 3;
  const OptimizationResult c = optimize_controls(spec, swap2, tmpl, obj, opt);
  for (const OptimizationResult* other : {&b, &c}) {
    CHECK(bitwise_equal(a.best_seq.packed(), other->best_seq.packed()));
    CHECK(std::memcmp(&a.G, &other->G, sizeof(double)) == 0);
    CHECK(a.restart_index == other->restart_index);
    CHECK(a.iterations_used == other->iterations_used);
    CHECK(a.trace.size() == other->trace.size());
  }

  CHECK(a.best_seq.hx.cwiseAbs().maxCoeff() <= 2.0);
  CHECK(a.best_seq.hy.cwiseAbs().maxCoeff() <= 2.0);
  CHECK(std::abs(a.G - ((1 - obj.mu) * a.penalty - obj.mu * a.fidelity)) < 1e-12);
  REQUIRE(a.trace.size() >= 2);
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].objective <= a.trace[i - 1].objective);

  // Best-of selection picks the lowest G over the individual restarts.
  for (int r = 0; r < opt.restarts; ++r) {
    const ControlSequence init = random_initial_sequence(tmpl, opt.init_amplitude, restart_seed(opt.seed, r));
    const OptimizationResult single = optimize_from(spec, swap2, init, obj, opt);
    CHECK(a.G <= single.G);
  }
}

TEST_CASE("restart seeds") {
  CHECK(restart_seed(1, 0) != restart_seed(1, 1));
  CHECK(restart_seed(1, 0) != restart_seed(2, 0));
  CHECK(restart_seed(5, 3) == restart_seed(5, 3));
  const ControlSequence tmpl = ControlSequence::zeros(32, 0.2, 10);
  const ControlSequence s = random_initial_sequence(tmpl, 0.5, 99);
  CHECK(s.hx.cwiseAbs().maxCoeff() <= 0.5);
  CHECK(s.hy.cwiseAbs().maxCoeff() <= 0.5);
  CHECK(bitwise_equal(s.packed(), random_initial_sequence(tmpl, 0.5, 99).packed()));
}
