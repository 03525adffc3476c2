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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/linalg.hpp"
#include "krotov/model.hpp"
#include "krotov/ode.hpp"
#include "krotov/path.hpp"
#include "krotov/sim.hpp"
#include "krotov/solvers.hpp"

// Successive improvement of a feedback law u = -K x + v.
//
// Step 2 fits q_k = x' P_k x - 2 g_k' x as the cost-to-go of the current
// law (a linear sweep backward from the terminal weight):
//
//   P' + P A_cl + A_cl' P + Q_eff + K' R K = 0,          P(tf) = F_eff
//   g' + A_cl' g + C' Q z + K' R v - P B v = 0,          g(tf) = C' F z(tf)
//
// with A_cl = A - B K. Step 3 minimizes s over u pointwise, which gives
// K <- 1/2 R^-1 B' (P + P') and v <- R^-1 B' g. Step 4 simulates and stops
// once consecutive costs differ by less than epsilon.

namespace krotov {

struct KrotovRunConfig {
  double epsilon = 1e-6;
  int max_iter = 50;
  double dt = 1e-3;
};

struct IterationRecord {
  int k = 0;
  /// Improving-function parameters fitted to this record's law. Empty paths
  /// on the last record (no further sweep was needed).
  MatrixPath P_k;
  VectorPath g_k;
  ControlLaw gain_k;
  double J_k = 0.0;
  /// J_{k-1} - J_k; zero for k = 0.
  double delta = 0.0;
  /// max |K_k - K_{k-1}| over the grid; zero for k = 0.
  double max_gain_change = 0.0;
};

namespace iterative_detail {

struct Sweep {
  MatrixPath P;
  VectorPath g;
};

inline Sweep evaluate_law(const LqProblem& problem, const ControlLaw& law, const std::vector<double>& grid) {
  const auto p_rhs = [&](double t, const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
    const Eigen::MatrixXd k = law.K(t);
    const Eigen::MatrixXd a_cl = problem.A.eval(t) - problem.B.eval(t) * k;
    return -(p * a_cl + a_cl.transpose() * p + problem.state_weight(t) + k.transpose() * problem.R * k);
  };
  Sweep sweep;
  try {
    sweep.P = integrate_backward<Eigen::MatrixXd>(p_rhs, grid, problem.terminal_state_weight(), "krotov_iterate");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IntegrationBlowup) throw;
    throw Error(ErrorCode::Unstabilizable, std::string("krotov_iterate: improving-function sweep diverged: ") + e.what());
  }
  if (!problem.is_tracking()) {
    sweep.g = VectorPath::constant(Eigen::VectorXd::Zero(problem.n()));
    return sweep;
  }
  const auto g_rhs = [&](double t, const Eigen::VectorXd& g) -> Eigen::VectorXd {
    const Eigen::MatrixXd k = law.K(t);
    const Eigen::MatrixXd b = problem.B.eval(t);
    const Eigen::MatrixXd a_cl = problem.A.eval(t) - b * k;
    const Eigen::VectorXd v = law.u_ff(t);
    const Eigen::MatrixXd p = sweep.P(t);
    return -(a_cl.transpose() * g + problem.reference_forcing(t) + k.transpose() * (problem.R * v) -
             0.5 * (p + p.transpose()) * (b * v));
  };
  const double tf = problem.horizon.tf();
  Eigen::VectorXd terminal = problem.C.eval(tf).transpose() * problem.F * problem.reference.eval(tf);
  try {
    sweep.g = integrate_backward<Eigen::VectorXd>(g_rhs, grid, std::move(terminal), "krotov_iterate");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IntegrationBlowup) throw;
    throw Error(ErrorCode::Unstabilizable, std::string("krotov_iterate: feedforward sweep diverged: ") + e.what());
  }
  return sweep;
}

/// Step for sweeping or simulating under `law`: cfg_dt, refined until
/// |lambda(A - B K)| h <= 0.5 on every node of `probe`. Keeps fixed-step RK4
/// inside its stability region when an early iterate has a very stiff gain.
inline double stable_step(const LqProblem& problem, const ControlLaw& law, const std::vector<double>& probe,
                          double cfg_dt) {
  double rate = 0.0;
  for (const double t : probe) {
    const Eigen::MatrixXd a_cl = problem.A.eval(t) - problem.B.eval(t) * law.K(t);
    rate = std::max(rate, Eigen::EigenSolver<Eigen::MatrixXd>(a_cl, false).eigenvalues().cwiseAbs().maxCoeff());
  }
  return rate > 0.0 ? std::min(cfg_dt, 0.5 / rate) : cfg_dt;
}

inline double simulate_cost(const LqProblem& problem, const ControlLaw& law, double dt) {
  try {
    return simulate(problem, law, dt, problem.horizon.tf()).total_cost;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Blowup) throw;
    throw Error(ErrorCode::Unstabilizable, std::string("krotov_iterate: process diverged: ") + e.what());
  }
}

inline double max_gain_change(const ControlLaw& a, const ControlLaw& b, const std::vector<double>& grid) {
  double worst = 0.0;
  for (const double t : grid) worst = std::max(worst, max_abs(a.K(t) - b.K(t)));
  return worst;
}

}  // namespace iterative_detail

/// Runs the improvement loop from `u0` and returns one record per admissible
/// process, the starting one included.
inline std::vector<IterationRecord> krotov_iterate(const LqProblem& problem, const ControlLaw& u0,
                                                   const KrotovRunConfig& cfg = {}) {
  if (!problem.horizon.is_finite()) {
    throw Error(ErrorCode::InfiniteHorizon, "krotov_iterate: needs a finite horizon");
  }
  if (!(cfg.epsilon > 0.0) || cfg.max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument, "krotov_iterate: epsilon must be positive and max_iter >= 1");
  }
  const auto grid = uniform_grid(problem.horizon.t0(), problem.horizon.tf(), cfg.dt);

  std::vector<IterationRecord> records;
  IterationRecord current;
  current.k = 0;
  current.gain_k = u0;
  const auto step = [&](const ControlLaw& law) { return iterative_detail::stable_step(problem, law, grid, cfg.dt); };
  current.J_k = iterative_detail::simulate_cost(problem, u0, step(u0));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const double h = step(current.gain_k);
    const auto sweep_grid = h < cfg.dt ? uniform_grid(problem.horizon.t0(), problem.horizon.tf(), h) : grid;
    auto sweep = iterative_detail::evaluate_law(problem, current.gain_k, sweep_grid);
    current.P_k = sweep.P;
    current.g_k = sweep.g;
    IterationRecord next;
    next.k = k;
    next.gain_k = gain_from_P(problem, sweep.P, problem.is_tracking() ? std::optional<VectorPath>(sweep.g)
                                                                      : std::nullopt);
    next.J_k = iterative_detail::simulate_cost(problem, next.gain_k, step(next.gain_k));
    next.delta = current.J_k - next.J_k;
    next.max_gain_change = iterative_detail::max_gain_change(next.gain_k, current.gain_k, grid);
    if (next.delta < -1e-6 * std::abs(current.J_k)) {
      throw Error(ErrorCode::DivergedIterate, "krotov_iterate: cost rose from " + std::to_string(current.J_k) +
                                                  " to " + std::to_string(next.J_k) + " at k=" +
                                                  std::to_string(k));
    }
    records.push_back(std::move(current));
    current = std::move(next);
    if (std::abs(current.delta) < cfg.epsilon) break;
  }
  records.push_back(std::move(current));
  return records;
}

/// Residual of the step-2 sweep equation at t,
///   P' + P A_cl + A_cl' P + Q_eff + K' R K,
/// with P' taken by finite differences of the samples (never from a stored
/// right-hand side), interpolated linearly between nodes.
inline Eigen::MatrixXd improving_function_residual(const LqProblem& problem, const MatrixPath& p_k,
                                                   const ControlLaw& law_k, double t) {
  Eigen::MatrixXd p_dot;
  if (p_k.is_constant()) {
    p_dot = Eigen::MatrixXd::Zero(problem.n(), problem.n());
  } else if (p_k.is_sampled()) {
    const auto& g = p_k.times();
    if (t < g.front() - 1e-9 || t > g.back() + 1e-9) {
      throw Error(ErrorCode::GridMismatch, "improving_function_residual: t outside the sampled grid");
    }
    const auto it = std::upper_bound(g.begin(), g.end(), t);
    const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(std::distance(g.begin(), it)), g.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    const Eigen::MatrixXd d_lo = finite_difference_at(g, p_k.samples(), lo);
    if (hi == lo || std::abs(t - g[lo]) <= 1e-12 * std::max(1.0, std::abs(t))) {
      p_dot = d_lo;
    } else {
      const double w = std::clamp((t - g[lo]) / (g[hi] - g[lo]), 0.0, 1.0);
      p_dot = (1.0 - w) * d_lo + w * finite_difference_at(g, p_k.samples(), hi);
    }
  } else {
    const double h = 1e-4 * std::max(1.0, std::abs(t));
    p_dot = (p_k(t + h) - p_k(t - h)) / (2.0 * h);
  }
  const Eigen::MatrixXd p = p_k(t);
  const Eigen::MatrixXd k = law_k.K(t);
  const Eigen::MatrixXd a_cl = problem.A.eval(t) - problem.B.eval(t) * k;
  return p_dot + p * a_cl + a_cl.transpose() * p + problem.state_weight(t) + k.transpose() * problem.R * k;
}

}  // namespace krotov
