// Copyright 2026 The krotov-lq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/krotov_core.hpp"
#include "krotov/linalg.hpp"
#include "krotov/model.hpp"
#include "krotov/ode.hpp"
#include "krotov/path.hpp"
#include "krotov/quadrature.hpp"
#include "krotov/solvers.hpp"
#include "krotov/trajectory.hpp"

namespace krotov {

/// Integral of the running cost plus the terminal term when the trajectory
/// reaches tf. Infinite-horizon costs are truncated at the last node; the
/// tail estimate lives in Trajectory::tail_bound.
inline double evaluate_cost(const LqProblem& problem, const Trajectory& traj) {
  if (traj.grid.size() < 3) throw Error(ErrorCode::GridTooCoarse, "evaluate_cost: fewer than 3 nodes");
  check_trajectory(problem, traj, "evaluate_cost");
  double cost = simpson(traj.grid, traj.running_cost);
  if (problem.horizon.is_finite()) {
    const double tf = problem.horizon.tf();
    if (std::abs(traj.grid.back() - tf) <= 1e-9 * std::max(1.0, std::abs(tf))) {
      cost += problem.cost_scale * problem.terminal_cost(traj.states.back());
    }
  }
  return cost;
}

/// Forward RK4 of x' = A x + B (-K x + u_ff) from x0 over [t0, t_end]. The
/// law is evaluated inside every stage; inputs are recorded at the nodes.
inline Trajectory simulate(const LqProblem& problem, const ControlLaw& law, double dt, double t_end) {
  const double t0 = problem.horizon.t0();
  if (problem.horizon.is_finite() && t_end > problem.horizon.tf() + 1e-9 * std::max(1.0, problem.horizon.tf())) {
    throw Error(ErrorCode::InvalidArgument, "simulate: t_end lies beyond tf");
  }
  if (problem.horizon.is_finite()) t_end = std::min(t_end, problem.horizon.tf());
  Trajectory traj;
  traj.grid = uniform_grid(t0, t_end, dt);
  const std::size_t count = traj.grid.size();
  traj.states.resize(count);
  traj.inputs.resize(count);
  traj.running_cost.resize(count);

  const bool lti = problem.A.is_constant() && problem.B.is_constant();
  const Eigen::MatrixXd a_const = problem.A.eval(t0);
  const Eigen::MatrixXd b_const = problem.B.eval(t0);
  const auto rhs = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd u = law(x, t);
    if (lti) return a_const * x + b_const * u;
    return problem.A.eval(t) * x + problem.B.eval(t) * u;
  };

  traj.states[0] = problem.x0;
  for (std::size_t i = 0;; ++i) {
    const double t = traj.grid[i];
    traj.inputs[i] = law(traj.states[i], t);
    traj.running_cost[i] = problem.cost_scale * problem.running_cost(traj.states[i], traj.inputs[i], t);
    if (i + 1 == count) break;
    traj.states[i + 1] = rk4_step(rhs, t, traj.states[i], traj.grid[i + 1] - t);
    if (!traj.states[i + 1].allFinite() || traj.states[i + 1].norm() > kBlowupThreshold) {
      throw Error(ErrorCode::Blowup, "simulate: state norm exceeds 1e12 at t=" + std::to_string(traj.grid[i + 1]));
    }
  }

  if (!problem.horizon.is_finite()) {
    if (problem.is_tracking() && !problem.reference.is_zero()) {
      traj.tail_bound = std::numeric_limits<double>::infinity();
    } else {
      const double te = traj.grid.back();
      const double abscissa = spectral_abscissa(problem.A.eval(te) - problem.B.eval(te) * law.K(te));
      traj.tail_bound = abscissa < 0.0 ? traj.running_cost.back() / (2.0 * std::abs(abscissa))
                                       : std::numeric_limits<double>::infinity();
    }
  }
  if (count >= 3) traj.total_cost = evaluate_cost(problem, traj);
  return traj;
}

/// sqrt of the time average of |z - C x|^2 over the nodes with t >= t_from.
inline double tracking_rms(const LqProblem& problem, const Trajectory& traj, double t_from) {
  std::vector<double> t;
  std::vector<double> e2;
  for (std::size_t i = 0; i < traj.grid.size(); ++i) {
    if (traj.grid[i] < t_from - 1e-12 * std::max(1.0, std::abs(t_from))) continue;
    t.push_back(traj.grid[i]);
    e2.push_back((problem.reference.eval(traj.grid[i]) - problem.C.eval(traj.grid[i]) * traj.states[i]).squaredNorm());
  }
  if (t.size() < 3) throw Error(ErrorCode::GridTooCoarse, "tracking_rms: fewer than 3 nodes in the window");
  return std::sqrt(simpson(t, e2) / (t.back() - t.front()));
}

struct LyapunovReport {
  /// max |dV/dt (finite differences) - (-x' (2 Q_eff + 1/2 S M S) x)| over the grid.
  double max_deviation = 0.0;
  /// Same, divided by max(1, |predicted|) node by node.
  double max_relative_deviation = 0.0;
  /// V(t_{i+1}) < V(t_i) wherever V(t_i) > 0.
  bool strictly_decreasing = true;
};

/// Compares the finite-difference derivative of V = x' (P + P') x along
/// `traj` with the dissipation predicted by the symmetrized algebraic equation.
inline LyapunovReport lyapunov_check(const LqProblem& problem, const Eigen::MatrixXd& p, const Trajectory& traj) {
  check_trajectory(problem, traj, "lyapunov_check");
  const double t0 = problem.horizon.t0();
  const Eigen::MatrixXd s = p + p.transpose();
  const Eigen::MatrixXd w = 2.0 * problem.state_weight(t0) + 0.5 * s * problem.control_coupling(t0) * s;
  const std::size_t count = traj.grid.size();
  std::vector<Eigen::VectorXd> v(count, Eigen::VectorXd(1));
  for (std::size_t i = 0; i < count; ++i) v[i](0) = traj.states[i].dot(s * traj.states[i]);

  LyapunovReport report;
  for (std::size_t i = 0; i < count; ++i) {
    const double predicted = -traj.states[i].dot(w * traj.states[i]);
    const double measured = count > 1 ? finite_difference_at(traj.grid, v, i)(0) : 0.0;
    const double dev = std::abs(measured - predicted);
    report.max_deviation = std::max(report.max_deviation, dev);
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev / std::max(1.0, std::abs(predicted)));
    if (i + 1 < count && v[i](0) > 0.0 && !(v[i + 1](0) < v[i](0))) report.strictly_decreasing = false;
  }
  return report;
}

struct PointwiseMinReport {
  int samples = 0;
  int violations = 0;              ///< s(x, u* + d) < s(x, u*) - tol
  double min_margin = std::numeric_limits<double>::infinity();
  double max_margin_error = 0.0;   ///< max |margin - |R~ d|^2|
  double max_gradient_norm = 0.0;  ///< max |d/dx s(x, u*(x), t)|
};

/// Samples random nodes of `traj` and random input perturbations d, and
/// checks that u* = law(x, t) minimizes s pointwise with margin |R~ d|^2.
/// Also measures the x-gradient of x -> s(x, u*(x), t) by central differences.
inline PointwiseMinReport pointwise_min_check(const LqProblem& problem, const KrotovFunction& kf,
                                              const ControlLaw& law, const Trajectory& traj, int n_samples,
                                              std::uint64_t seed) {
  check_trajectory(problem, traj, "pointwise_min_check");
  const Eigen::MatrixXd r_sqrt = spd_sqrt(problem.R);
  std::mt19937_64 rng(seed);
  const auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const Eigen::Index n = problem.n();
  const Eigen::Index m = problem.m();

  PointwiseMinReport report;
  for (int k = 0; k < n_samples; ++k) {
    const auto i = std::min(traj.grid.size() - 1, static_cast<std::size_t>(uniform01() * traj.grid.size()));
    const double t = traj.grid[i];
    const Eigen::VectorXd& x = traj.states[i];
    const Eigen::VectorXd u_star = law(x, t);
    const double spread = std::max(1.0, u_star.cwiseAbs().maxCoeff());
    Eigen::VectorXd d(m);
    for (Eigen::Index j = 0; j < m; ++j) d(j) = spread * (2.0 * uniform01() - 1.0);

    const double s_star = s_value(problem, kf, x, u_star, t);
    const double margin = s_value(problem, kf, x, u_star + d, t) - s_star;
    const double tol = 1e-9 * std::max(1.0, std::abs(s_star));
    if (margin < -tol) ++report.violations;
    report.min_margin = std::min(report.min_margin, margin);
    report.max_margin_error = std::max(report.max_margin_error, std::abs(margin - (r_sqrt * d).squaredNorm()));

    const double h = 1e-3 * std::max(1.0, x.norm());
    Eigen::VectorXd grad(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp(j) += h;
      xm(j) -= h;
      grad(j) = (s_value(problem, kf, xp, law(xp, t), t) - s_value(problem, kf, xm, law(xm, t), t)) / (2.0 * h);
    }
    report.max_gradient_norm = std::max(report.max_gradient_norm, grad.norm());
    ++report.samples;
  }
  return report;
}

}  // namespace krotov
