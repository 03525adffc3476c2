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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/linalg.hpp"
#include "krotov/model.hpp"
#include "krotov/path.hpp"
#include "krotov/quadrature.hpp"
#include "krotov/solvers.hpp"
#include "krotov/trajectory.hpp"

// The equivalent problem. With q(x, t) = x' P x - 2 g' x,
//
//   s(x, u, t) = dq/dt + dq/dx (A x + B u) + e' Q e + u' R u
//   s_f(x)     = e(tf)' F e(tf) - q(x, tf)
//   J_eq       = s_f(x(tf)) + q(x(t0), t0) + int s dt
//
// s and s_f use the un-halved integrand (the optimiser of 2J and J agree);
// equivalent_cost applies the problem's cost multiplier so it compares
// directly against J.

namespace krotov {

/// q(x, t) = x' P(t) x - 2 g(t)' x. P need not be symmetric or definite.
struct KrotovFunction {
  MatrixPath P;
  VectorPath g;

  static KrotovFunction quadratic(MatrixPath p) {
    const Eigen::Index n = p(p.is_sampled() ? p.times().front() : 0.0).rows();
    return {std::move(p), VectorPath::constant(Eigen::VectorXd::Zero(n))};
  }
  static KrotovFunction constant(const Eigen::MatrixXd& p) { return quadratic(MatrixPath::constant(p)); }

  [[nodiscard]] double q(const Eigen::VectorXd& x, double t) const { return x.dot(P(t) * x) - 2.0 * g(t).dot(x); }
};

namespace core_detail {

inline void check_in_horizon(const LqProblem& problem, double t, const char* who) {
  if (!std::isfinite(t) || !problem.horizon.contains(t)) {
    throw Error(ErrorCode::OutOfHorizon, std::string(who) + ": t=" + std::to_string(t) + " outside the horizon");
  }
}

}  // namespace core_detail

inline double s_value(const LqProblem& problem, const KrotovFunction& kf, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u, double t) {
  core_detail::check_in_horizon(problem, t, "s_value");
  const Eigen::MatrixXd p = kf.P(t);
  const Eigen::VectorXd g = kf.g(t);
  const Eigen::VectorXd f = problem.A.eval(t) * x + problem.B.eval(t) * u;
  const double q_t = x.dot(kf.P.derivative(t) * x) - 2.0 * kf.g.derivative(t).dot(x);
  const double q_x_f = x.dot((p + p.transpose()) * f) - 2.0 * g.dot(f);
  return q_t + q_x_f + problem.running_cost(x, u, t);
}

inline double s_terminal_value(const LqProblem& problem, const KrotovFunction& kf, const Eigen::VectorXd& xf) {
  if (!problem.horizon.is_finite()) {
    throw Error(ErrorCode::InfiniteHorizon, "s_terminal_value: undefined for an infinite horizon");
  }
  return problem.terminal_cost(xf) - kf.q(xf, problem.horizon.tf());
}

/// s(x, u, t) = x' M x - 2 a' x + |R~ u + 1/2 R~^-1 B' (P + P') x - R~^-1 B' g|^2 + c
/// with R~ the SPD square root of R.
struct SDecomposition {
  Eigen::MatrixXd M_resid;       ///< quadratic residual (the generalized equation evaluated at P)
  Eigen::VectorXd affine_coeff;  ///< g' + A' g + C' Q z - 1/2 (P + P') M g
  Eigen::MatrixXd R_sqrt;
  Eigen::MatrixXd shift_gain;    ///< 1/2 R~^-1 B' (P + P')
  Eigen::VectorXd shift_offset;  ///< R~^-1 B' g
  double offset = 0.0;           ///< z' Q z - g' M g

  [[nodiscard]] Eigen::VectorXd completed_square_shift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return R_sqrt * u + shift_gain * x - shift_offset;
  }
  [[nodiscard]] double evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return x.dot(M_resid * x) - 2.0 * affine_coeff.dot(x) + completed_square_shift(x, u).squaredNorm() + offset;
  }
};

inline SDecomposition decompose_s(const LqProblem& problem, const KrotovFunction& kf, double t) {
  core_detail::check_in_horizon(problem, t, "decompose_s");
  const Eigen::MatrixXd p = kf.P(t);
  const Eigen::VectorXd g = kf.g(t);
  const Eigen::MatrixXd a = problem.A.eval(t);
  const Eigen::MatrixXd b = problem.B.eval(t);
  const Eigen::MatrixXd m = problem.control_coupling(t);
  const Eigen::MatrixXd s = p + p.transpose();

  SDecomposition d;
  d.M_resid = generalized_residual(problem, p, kf.P.derivative(t), t).value;
  d.affine_coeff = kf.g.derivative(t) + a.transpose() * g + problem.reference_forcing(t) - 0.5 * s * m * g;
  d.R_sqrt = spd_sqrt(problem.R);
  const auto r_sqrt_lu = d.R_sqrt.partialPivLu();
  d.shift_gain = 0.5 * r_sqrt_lu.solve(b.transpose() * s);
  d.shift_offset = r_sqrt_lu.solve(b.transpose() * g);
  d.offset = -g.dot(m * g);
  if (problem.is_tracking()) {
    const Eigen::VectorXd z = problem.reference.eval(t);
    d.offset += z.dot(problem.Q * z);
  }
  return d;
}

/// J_eq = cost_scale * (s_f(x_N) + q(x_0, t_0) + int s dt) along `traj`. A
/// trajectory that stops before tf (or any infinite-horizon run) is treated
/// as a problem truncated at its last node with zero terminal weight, so
/// s_f(x_N) = -q(x_N, t_N).
inline double equivalent_cost(const LqProblem& problem, const KrotovFunction& kf, const Trajectory& traj) {
  check_trajectory(problem, traj, "equivalent_cost");
  const auto& t = traj.grid;
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = s_value(problem, kf, traj.states[i], traj.inputs[i], t[i]);
  const bool reaches_tf = problem.horizon.is_finite() &&
                          std::abs(t.back() - problem.horizon.tf()) <= 1e-9 * std::max(1.0, std::abs(t.back()));
  const double terminal = reaches_tf ? s_terminal_value(problem, kf, traj.states.back())
                                     : -kf.q(traj.states.back(), t.back());
  return problem.cost_scale * (terminal + kf.q(traj.states.front(), t.front()) + simpson(t, s));
}

struct ConvexityCertificate {
  bool certified = false;
  double min_eig_over_grid = std::numeric_limits<double>::infinity();
  /// min eig of F - P(tf) (C' F C - P(tf) for tracking); +inf for infinite horizons.
  double terminal_min_eig = std::numeric_limits<double>::infinity();
  std::optional<double> failure_time;
  std::vector<std::pair<double, double>> samples;  ///< (t, min eig of sym(M_resid))
};

inline constexpr double kCertificateTol = 1e-8;

/// s is convex in (x, u) iff sym(M_resid) >= 0; s_f is convex iff the
/// terminal weight minus P(tf) is >= 0.
inline ConvexityCertificate convexity_certificate(const LqProblem& problem, const KrotovFunction& kf,
                                                  const std::vector<double>& grid) {
  ConvexityCertificate cert;
  cert.samples.reserve(grid.size());
  for (const double t : grid) {
    core_detail::check_in_horizon(problem, t, "convexity_certificate");
    const double e = min_eig_symmetric_part(generalized_residual(problem, kf.P(t), kf.P.derivative(t), t).value);
    cert.samples.emplace_back(t, e);
    if (e < cert.min_eig_over_grid) cert.min_eig_over_grid = e;
    if (e < -kCertificateTol && !cert.failure_time) cert.failure_time = t;
  }
  if (problem.horizon.is_finite()) {
    const double tf = problem.horizon.tf();
    cert.terminal_min_eig = min_eig_symmetric_part(problem.terminal_state_weight() - kf.P(tf));
    if (cert.terminal_min_eig < -kCertificateTol && !cert.failure_time) cert.failure_time = tf;
  }
  cert.certified = cert.min_eig_over_grid >= -kCertificateTol && cert.terminal_min_eig >= -kCertificateTol;
  return cert;
}

/// Largest p in [lo, hi] for which the constant scalar Krotov function
/// q = p x^2 is certified, by bisection. Requires n = 1, lo certified and hi not.
inline double largest_certified_scalar(const LqProblem& problem, double lo, double hi, double tol = 1e-10) {
  if (problem.n() != 1) throw Error(ErrorCode::InvalidArgument, "largest_certified_scalar: scalar problems only");
  const std::vector<double> grid{problem.horizon.t0()};
  const auto ok = [&](double p) {
    return convexity_certificate(problem, KrotovFunction::constant(Eigen::MatrixXd::Constant(1, 1, p)), grid)
        .certified;
  };
  if (!ok(lo) || ok(hi)) {
    throw Error(ErrorCode::InvalidArgument, "largest_certified_scalar: [lo, hi] does not bracket the bound");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace krotov
