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

#include "spinctrl/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace spinctrl {

namespace {

constexpr double kCurvatureFloor = 1e-12;
constexpr int kMaxZoom = 50;
constexpr int kMaxBracket = 60;

RealVector clamp_to_box(const RealVector& x, double bound) {
  return x.cwiseMax(-bound).cwiseMin(bound);
}

struct LineSearchPoint {
  double step = 0;
  RealVector x;
  ValueGrad vg;
};

struct LineSearchOutcome {
  LineSearchPoint point;
  bool ok = false;
  bool hit_bound = false;
};

// Strong-Wolfe search along x + a p for a in (0, a_max], bracketing then
// zooming with safeguarded cubic interpolation.
class LineSearch {
 public:
  LineSearch(const ValueGradFn& fn, const RealVector& x, const RealVector& p, double f0,
             double d0, double bound, const OptimizerConfig& cfg)
      : fn_(fn), x_(x), p_(p), f0_(f0), d0_(d0), bound_(bound), cfg_(cfg) {}

  LineSearchOutcome run(double a_init, double a_max) {
    LineSearchPoint prev{0.0, x_, {f0_, {}}};
    double d_prev = d0_;
    double a = std::min(a_init, a_max);
    for (int i = 0; i < kMaxBracket; ++i) {
      LineSearchPoint cur = eval(a);
      const double d = cur.vg.gradient.dot(p_);
      if (cur.vg.value > f0_ + cfg_.wolfe_c1 * a * d0_ || (i > 0 && cur.vg.value >= prev.vg.value))
        return zoom(prev, d_prev, cur, d);
      if (std::abs(d) <= -cfg_.wolfe_c2 * d0_) return {std::move(cur), true, a == a_max};
      if (d >= 0) return zoom(cur, d, prev, d_prev);
      // Sufficient decrease holds at the box edge but the slope still points
      // outward: take the edge.
      if (a == a_max) return {std::move(cur), true, true};
      prev = std::move(cur);
      d_prev = d;
      a = std::min(4.0 * a, a_max);
    }
    const bool moved = prev.step > 0;
    return {std::move(prev), moved, false};
  }

 private:
  LineSearchPoint eval(double a) {
    RealVector xa = clamp_to_box(x_ + a * p_, bound_);
    ValueGrad vg = fn_(xa);
    return {a, std::move(xa), std::move(vg)};
  }

  static double cubic_min(double a, double fa, double da, double b, double fb, double db) {
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    if (disc < 0) return 0.5 * (a + b);
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom == 0) return 0.5 * (a + b);
    return b - (b - a) * (db + d2 - d1) / denom;
  }

  LineSearchOutcome zoom(LineSearchPoint lo, double d_lo, LineSearchPoint hi, double d_hi) {
    for (int i = 0; i < kMaxZoom; ++i) {
      const double left = std::min(lo.step, hi.step);
      const double width = std::abs(hi.step - lo.step);
      double a = cubic_min(lo.step, lo.vg.value, d_lo, hi.step, hi.vg.value, d_hi);
      if (!std::isfinite(a) || a < left + 0.1 * width || a > left + 0.9 * width)
        a = 0.5 * (lo.step + hi.step);
      if (width <= std::numeric_limits<double>::epsilon() * std::max(1.0, hi.step)) break;
      LineSearchPoint cur = eval(a);
      const double d = cur.vg.gradient.dot(p_);
      if (cur.vg.value > f0_ + cfg_.wolfe_c1 * a * d0_ || cur.vg.value >= lo.vg.value) {
        hi = std::move(cur);
        d_hi = d;
        continue;
      }
      if (std::abs(d) <= -cfg_.wolfe_c2 * d0_) return {std::move(cur), true, false};
      if (d * (hi.step - lo.step) >= 0) {
        hi = std::move(lo);
        d_hi = d_lo;
      }
      lo = std::move(cur);
      d_lo = d;
    }
    // Budget exhausted: best point seen, flagged as a failure.
    return {std::move(lo), false, false};
  }

  const ValueGradFn& fn_;
  const RealVector& x_;
  const RealVector& p_;
  double f0_;
  double d0_;
  double bound_;
  const OptimizerConfig& cfg_;
};

// Coordinates sitting on the box with the descent direction -g pointing out.
std::vector<bool> active_set(const RealVector& x, const RealVector& g, double bound) {
  const double edge = bound * (1.0 - 1e-12);
  std::vector<bool> active(x.size(), false);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    active[i] = (x[i] >= edge && g[i] < 0) || (x[i] <= -edge && g[i] > 0);
  return active;
}

double max_feasible_step(const RealVector& x, const RealVector& p, double bound) {
  double a_max = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (p[i] > 0) a_max = std::min(a_max, (bound - x[i]) / p[i]);
    if (p[i] < 0) a_max = std::min(a_max, (-bound - x[i]) / p[i]);
  }
  return std::max(a_max, 0.0);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void OptimizerConfig::validate(double bound) const {
  if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
  if (!(grad_tol > 0)) throw std::invalid_argument("OptimizerConfig: grad_tol must be > 0");
  if (!(wolfe_c1 > 0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1))
    throw std::invalid_argument("OptimizerConfig: need 0 < c1 < c2 < 1");
  if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts must be >= 1");
  if (!(init_amplitude >= 0 && init_amplitude <= bound))
    throw std::invalid_argument("OptimizerConfig: init_amplitude must lie in [0, bound]");
}

BfgsResult bfgs_minimize(const ValueGradFn& fn, const RealVector& x0, double bound,
                         const OptimizerConfig& cfg, const IterateCallback& on_iterate) {
  cfg.validate(std::numeric_limits<double>::infinity());
  if (!(bound > 0)) throw std::invalid_argument("bfgs_minimize: bound must be > 0");
  if (x0.cwiseAbs().maxCoeff() > bound)
    throw std::invalid_argument("bfgs_minimize: starting point outside the box");

  const Eigen::Index dim = x0.size();
  BfgsResult result;
  result.x = x0;
  ValueGrad cur = fn(result.x);
  result.value = cur.value;
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(dim, dim);
  bool fresh_hessian = true;

  const auto projected_gradient = [&](const std::vector<bool>& active) {
    RealVector pg = cur.gradient;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (active[i]) pg[i] = 0;
    return pg;
  };

  {
    const RealVector pg = projected_gradient(active_set(result.x, cur.gradient, bound));
    result.trace.push_back({cur.value, pg.lpNorm<Eigen::Infinity>(), 0.0, false, false});
    if (on_iterate) on_iterate(result.x, cur.value);
  }

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    std::vector<bool> active = active_set(result.x, cur.gradient, bound);
    const RealVector pg = projected_gradient(active);
    if (pg.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) {
      result.converged = true;
      break;
    }

    bool reset = false;
    RealVector p = -(inv_hessian * pg);
    const double edge = bound * (1.0 - 1e-12);
    for (Eigen::Index i = 0; i < dim; ++i)
      if (active[i] || (result.x[i] >= edge && p[i] > 0) || (result.x[i] <= -edge && p[i] < 0)) p[i] = 0;
    if (!(cur.gradient.dot(p) < 0)) {
      inv_hessian.setIdentity();
      fresh_hessian = true;
      reset = true;
      p = -pg;
    }
    const double d0 = cur.gradient.dot(p);
    const double a_max = max_feasible_step(result.x, p, bound);
    if (!(d0 < 0) || a_max <= 0) {
      result.line_search_failed = true;
      break;
    }

    LineSearch search(fn, result.x, p, cur.value, d0, bound, cfg);
    LineSearchOutcome step = search.run(1.0, a_max);
    if (!step.ok) {
      result.line_search_failed = true;
      if (step.point.step > 0 && step.point.vg.value < cur.value) {
        result.x = std::move(step.point.x);
        cur = std::move(step.point.vg);
        result.value = cur.value;
        ++result.iterations;
        result.trace.push_back({cur.value, projected_gradient(active_set(result.x, cur.gradient, bound))
                                               .lpNorm<Eigen::Infinity>(),
                                step.point.step, reset, false});
        if (on_iterate) on_iterate(result.x, cur.value);
      }
      break;
    }

    const RealVector s = step.point.x - result.x;
    const RealVector y = step.point.vg.gradient - cur.gradient;
    result.x = std::move(step.point.x);
    cur = std::move(step.point.vg);
    result.value = cur.value;
    ++result.iterations;

    const double sy = s.dot(y);
    if (step.hit_bound || sy <= kCurvatureFloor) {
      inv_hessian.setIdentity();
      fresh_hessian = true;
      reset = true;
    } else {
      if (fresh_hessian) {
        inv_hessian *= sy / y.squaredNorm();
        fresh_hessian = false;
      }
      const double rho = 1.0 / sy;
      const RealVector hy = inv_hessian * y;
      // H <- (I - rho s y') H (I - rho y s') + rho s s'
      inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                     rho * (hy * s.transpose() + s * hy.transpose());
    }

    const RealVector pg_new = projected_gradient(active_set(result.x, cur.gradient, bound));
    result.trace.push_back(
        {cur.value, pg_new.lpNorm<Eigen::Infinity>(), step.point.step, reset, step.hit_bound});
    if (on_iterate) on_iterate(result.x, cur.value);
  }
  if (!result.converged && !result.line_search_failed) {
    const RealVector pg = projected_gradient(active_set(result.x, cur.gradient, bound));
    result.converged = pg.lpNorm<Eigen::Infinity>() <= cfg.grad_tol;
  }
  return result;
}

BfgsResult bfgs_minimize(const ObjectiveFn& objective, const GradientFn& gradient,
                         const RealVector& x0, double bound, const OptimizerConfig& cfg,
                         const IterateCallback& on_iterate) {
  return bfgs_minimize(
      [&](const RealVector& x) { return ValueGrad{objective(x), gradient(x)}; }, x0, bound, cfg,
      on_iterate);
}

std::uint64_t restart_seed(std::uint64_t seed, int index) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(index));
}

ControlSequence random_initial_sequence(const ControlSequence& tmpl, double amplitude,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  ControlSequence seq = ControlSequence::zeros(tmpl.slices(), tmpl.dt, tmpl.bound);
  for (int j = 0; j < seq.slices(); ++j) seq.hx[j] = dist(rng);
  for (int j = 0; j < seq.slices(); ++j) seq.hy[j] = dist(rng);
  return seq;
}

OptimizationResult optimize_from(const ChainSpec& spec, const TargetGate& target,
                                 const ControlSequence& initial, const ObjectiveConfig& obj_cfg,
                                 const OptimizerConfig& opt_cfg) {
  spec.validate();
  target.validate();
  initial.validate();
  obj_cfg.validate();
  opt_cfg.validate(initial.bound);

  const double dt = initial.dt;
  const double bound = initial.bound;
  // Recent evaluations, so the iterate callback can reuse G, F and P.
  std::deque<std::pair<RealVector, Evaluation>> recent;
  const auto fn = [&](const RealVector& x) {
    Evaluation e = evaluate(spec, ControlSequence::from_packed(x, dt, bound), target, obj_cfg);
    ValueGrad vg{e.surrogate_G, e.gradient};
    recent.emplace_front(x, std::move(e));
    if (recent.size() > 4) recent.pop_back();
    return vg;
  };

  OptimizationResult out;
  const auto on_iterate = [&](const RealVector& x, double value) {
    auto it = std::find_if(recent.begin(), recent.end(), [&](const auto& r) { return r.first == x; });
    const Evaluation e = it != recent.end()
                             ? it->second
                             : evaluate(spec, ControlSequence::from_packed(x, dt, bound), target,
                                        obj_cfg, false);
    out.trace.push_back({value, e.G, e.fidelity, e.penalty});
  };

  const BfgsResult bfgs = bfgs_minimize(fn, initial.packed(), bound, opt_cfg, on_iterate);
  out.best_seq = ControlSequence::from_packed(bfgs.x, dt, bound);
  const Evaluation final_eval = evaluate(spec, out.best_seq, target, obj_cfg, false);
  out.fidelity = final_eval.fidelity;
  out.penalty = final_eval.penalty;
  out.G = final_eval.G;
  out.iterations_used = bfgs.iterations;
  out.converged = bfgs.converged;
  out.line_search_failed = bfgs.line_search_failed;
  out.seed = opt_cfg.seed;
  return out;
}

OptimizationResult optimize_controls(const ChainSpec& spec, const TargetGate& target,
                                     const ControlSequence& seq_template,
                                     const ObjectiveConfig& obj_cfg,
                                     const OptimizerConfig& opt_cfg) {
  opt_cfg.validate(seq_template.bound);
  const int restarts = opt_cfg.restarts;
  std::vector<OptimizationResult> results(restarts);
  std::vector<std::exception_ptr> errors(restarts);

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int r = next++; r < restarts; r = next++) {
      try {
        const std::uint64_t rs = restart_seed(opt_cfg.seed, r);
        const ControlSequence init = random_initial_sequence(seq_template, opt_cfg.init_amplitude, rs);
        results[r] = optimize_from(spec, target, init, obj_cfg, opt_cfg);
        results[r].restart_index = r;
        results[r].restart_seed = rs;
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  unsigned threads = opt_cfg.threads ? opt_cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, static_cast<unsigned>(restarts));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (results[r].G < results[best].G) best = r;
  return std::move(results[best]);
}

}  // namespace spinctrl
