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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/linalg.hpp"
#include "krotov/model.hpp"
#include "krotov/ode.hpp"
#include "krotov/path.hpp"
#include "krotov/quadrature.hpp"

// Feedforward of the tracking law. With A_cl = A - 1/2 B R^-1 B' (P + P'),
//
//   g' = -A_cl' g - C' Q z,   g(tf) = C(tf)' F z(tf)
//
// and on an infinite horizon the bounded solution
//
//   g(t) = int_t^inf exp(A_cl' (tau - t)) C' Q z(tau) dtau.
//
// The integral carries a plus sign: it is the solution that makes the
// closed-loop output follow z (u_ff = R^-1 B' g pushes y toward z).

namespace krotov {

enum class FeedforwardMethod { BackwardOde, TruncatedIntegral, ClosedFormSinusoid, HarmonicBalance };

inline const char* to_string(FeedforwardMethod m) {
  switch (m) {
    case FeedforwardMethod::BackwardOde: return "backward_ode";
    case FeedforwardMethod::TruncatedIntegral: return "truncated_integral";
    case FeedforwardMethod::ClosedFormSinusoid: return "closed_form_sinusoid";
    case FeedforwardMethod::HarmonicBalance: return "harmonic_balance";
  }
  return "unknown";
}

struct FeedforwardSolution {
  VectorPath g;
  FeedforwardMethod method = FeedforwardMethod::BackwardOde;
  /// max over the reporting grid of |g' + A_cl' g + C' Q z|, divided by
  /// max(1, max |C' Q z|) on the same grid.
  double ode_residual_max = 0.0;
};

namespace tracking_detail {

inline Eigen::MatrixXd closed_loop(const LqProblem& problem, const Eigen::MatrixXd& p, double t) {
  return problem.A.eval(t) - 0.5 * problem.control_coupling(t) * (p + p.transpose());
}

inline double forcing_scale(const LqProblem& problem, const std::vector<double>& grid) {
  double scale = 1.0;
  for (const double t : grid) scale = std::max(scale, problem.reference_forcing(t).cwiseAbs().maxCoeff());
  return scale;
}

}  // namespace tracking_detail

/// Relative residual of the g-equation on `grid`. Derivatives of g come from
/// five-point finite differences of the node values when g is sampled on
/// `grid`, and from the path itself otherwise.
inline double feedforward_residual(const LqProblem& problem, const MatrixPath& p, const VectorPath& g,
                                   const std::vector<double>& grid) {
  const bool on_grid = g.is_sampled() && g.times() == grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const Eigen::VectorXd g_dot = on_grid ? finite_difference_at(g.times(), g.samples(), i) : g.derivative(t);
    const Eigen::VectorXd r = g_dot + tracking_detail::closed_loop(problem, p(t), t).transpose() * g(t) +
                              problem.reference_forcing(t);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst / tracking_detail::forcing_scale(problem, grid);
}

/// Backward RK4 of the g-equation on a uniform grid of step `dt`.
inline FeedforwardSolution integrate_g(const LqProblem& problem, const MatrixPath& p, double dt) {
  if (!problem.horizon.is_finite()) {
    throw Error(ErrorCode::InfiniteHorizon, "integrate_g: needs a finite horizon; use steady_state_g");
  }
  const double tf = problem.horizon.tf();
  const auto grid = uniform_grid(problem.horizon.t0(), tf, dt);
  const auto rhs = [&](double t, const Eigen::VectorXd& g) -> Eigen::VectorXd {
    return -(tracking_detail::closed_loop(problem, p(t), t).transpose() * g) - problem.reference_forcing(t);
  };
  Eigen::VectorXd terminal = Eigen::VectorXd::Zero(problem.n());
  if (problem.is_tracking()) {
    terminal = problem.C.eval(tf).transpose() * problem.F * problem.reference.eval(tf);
  }
  FeedforwardSolution sol;
  sol.g = integrate_backward<Eigen::VectorXd>(rhs, grid, std::move(terminal), "integrate_g");
  sol.method = FeedforwardMethod::BackwardOde;
  sol.ode_residual_max = feedforward_residual(problem, p, sol.g, grid);
  return sol;
}

/// Smallest T (doubling from the slowest mode's estimate) with
/// |exp(A_cl' T)|_2 < 1e-10.
inline double auto_truncation(const Eigen::MatrixXd& a_cl) {
  const double abscissa = spectral_abscissa(a_cl);
  if (!(abscissa < 0.0)) throw Error(ErrorCode::NotHurwitz, "steady_state_g: closed loop is not Hurwitz");
  double horizon = std::log(1e10) / std::abs(abscissa);
  for (int i = 0; i < 60; ++i, horizon *= 1.25) {
    const Eigen::MatrixXd e = matrix_exp(Eigen::MatrixXd(a_cl.transpose() * horizon));
    if (e.operatorNorm() < 1e-10) return horizon;
  }
  return horizon;
}

/// Steady-state g(t) by composite Simpson over [t, t + T]. T <= 0 selects
/// the truncation automatically.
inline Eigen::VectorXd steady_state_g(const LqProblem& problem, const Eigen::MatrixXd& p, double t,
                                      double truncation_T = 0.0) {
  if (problem.horizon.is_finite() || !problem.is_time_invariant()) {
    throw Error(ErrorCode::InvalidArgument, "steady_state_g: needs an infinite-horizon LTI problem");
  }
  const double t0 = problem.horizon.t0();
  const Eigen::MatrixXd a_cl = tracking_detail::closed_loop(problem, p, t0);
  if (!is_hurwitz(a_cl)) throw Error(ErrorCode::NotHurwitz, "steady_state_g: closed loop is not Hurwitz");
  const double horizon = truncation_T > 0.0 ? truncation_T : auto_truncation(a_cl);

  // Step resolves the fastest closed-loop mode and the reference frequency.
  Eigen::EigenSolver<Eigen::MatrixXd> es(a_cl, false);
  const double rate = std::max({es.eigenvalues().cwiseAbs().maxCoeff(), problem.reference.omega(), 1e-12});
  auto intervals = static_cast<std::size_t>(std::ceil(horizon * rate / 0.02));
  intervals = std::max<std::size_t>(intervals + (intervals % 2), 2);
  const double h = horizon / static_cast<double>(intervals);

  const Eigen::MatrixXd step = matrix_exp(Eigen::MatrixXd(a_cl.transpose() * h));
  const Eigen::MatrixXd ctq = problem.C.eval(t0).transpose() * problem.Q;
  const Eigen::Index n = problem.n();
  std::vector<double> tau(intervals + 1);
  std::vector<std::vector<double>> f(static_cast<std::size_t>(n), std::vector<double>(intervals + 1));
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t k = 0; k <= intervals; ++k) {
    tau[k] = static_cast<double>(k) * h;
    const Eigen::VectorXd v = power * (ctq * problem.reference.eval(t + tau[k]));
    for (Eigen::Index j = 0; j < n; ++j) f[static_cast<std::size_t>(j)][k] = v(j);
    power = power * step;
  }
  Eigen::VectorXd g(n);
  for (Eigen::Index j = 0; j < n; ++j) g(j) = simpson(tau, f[static_cast<std::size_t>(j)]);
  return g;
}

/// Exact steady-state g for the supported reference families, from the
/// linear algebra of the g-equation:
///   constant: A_cl' g = -C' Q z0
///   ramp:     g = g0 + g1 t with A_cl' g1 = -C' Q s, A_cl' g0 = -g1
///   sinusoid: g = Gs sin(wt) + Gc cos(wt) with
///             A_cl' Gs - w Gc = -C' Q a,  w Gs + A_cl' Gc = 0.
struct SteadyFeedforward {
  ReferenceSignal::Kind kind = ReferenceSignal::Kind::Zero;
  Eigen::VectorXd g0;  ///< constant part (constant, ramp)
  Eigen::VectorXd g1;  ///< ramp slope
  Eigen::VectorXd gs;  ///< sine coefficient
  Eigen::VectorXd gc;  ///< cosine coefficient
  double omega = 0.0;

  [[nodiscard]] Eigen::VectorXd operator()(double t) const {
    switch (kind) {
      case ReferenceSignal::Kind::Zero: return g0;
      case ReferenceSignal::Kind::Constant: return g0;
      case ReferenceSignal::Kind::Ramp: return g0 + g1 * t;
      case ReferenceSignal::Kind::Sinusoid: return gs * std::sin(omega * t) + gc * std::cos(omega * t);
    }
    return g0;
  }
  [[nodiscard]] Eigen::VectorXd derivative(double t) const {
    switch (kind) {
      case ReferenceSignal::Kind::Ramp: return g1;
      case ReferenceSignal::Kind::Sinusoid:
        return omega * (gs * std::cos(omega * t) - gc * std::sin(omega * t));
      default: return Eigen::VectorXd::Zero(g0.size());
    }
  }
};

inline SteadyFeedforward harmonic_balance(const LqProblem& problem, const Eigen::MatrixXd& p) {
  if (problem.horizon.is_finite() || !problem.is_time_invariant()) {
    throw Error(ErrorCode::InvalidArgument, "harmonic_balance: needs an infinite-horizon LTI problem");
  }
  const double t0 = problem.horizon.t0();
  const Eigen::MatrixXd a_cl = tracking_detail::closed_loop(problem, p, t0);
  if (!is_hurwitz(a_cl)) throw Error(ErrorCode::NotHurwitz, "harmonic_balance: closed loop is not Hurwitz");
  const Eigen::MatrixXd at = a_cl.transpose();
  const Eigen::Index n = problem.n();
  const Eigen::MatrixXd ctq = problem.C.eval(t0).transpose() * problem.Q;
  const auto lu = at.partialPivLu();

  SteadyFeedforward ff;
  ff.kind = problem.is_tracking() ? problem.reference.kind() : ReferenceSignal::Kind::Zero;
  ff.g0 = Eigen::VectorXd::Zero(n);
  ff.g1 = Eigen::VectorXd::Zero(n);
  ff.gs = Eigen::VectorXd::Zero(n);
  ff.gc = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd w = problem.is_tracking() ? Eigen::VectorXd(ctq * problem.reference.vector())
                                                  : Eigen::VectorXd::Zero(n);
  switch (ff.kind) {
    case ReferenceSignal::Kind::Zero: break;
    case ReferenceSignal::Kind::Constant: ff.g0 = lu.solve(-w); break;
    case ReferenceSignal::Kind::Ramp:
      ff.g1 = lu.solve(-w);
      ff.g0 = lu.solve(-ff.g1);
      break;
    case ReferenceSignal::Kind::Sinusoid: {
      const double om = problem.reference.omega();
      ff.omega = om;
      Eigen::MatrixXd big(2 * n, 2 * n);
      big << at, -om * Eigen::MatrixXd::Identity(n, n), om * Eigen::MatrixXd::Identity(n, n), at;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
      rhs.head(n) = -w;
      const Eigen::VectorXd sol = big.partialPivLu().solve(rhs);
      ff.gs = sol.head(n);
      ff.gc = sol.tail(n);
      break;
    }
  }
  return ff;
}

/// Steady-state feedforward as a path, with its residual measured on `report_grid`.
inline FeedforwardSolution steady_state_feedforward(const LqProblem& problem, const Eigen::MatrixXd& p,
                                                    const std::vector<double>& report_grid) {
  const SteadyFeedforward ff = harmonic_balance(problem, p);
  FeedforwardSolution sol;
  sol.g = VectorPath::function([ff](double t) { return ff(t); }, [ff](double t) { return ff.derivative(t); });
  sol.method = FeedforwardMethod::HarmonicBalance;
  sol.ode_residual_max = feedforward_residual(problem, MatrixPath::constant(p), sol.g, report_grid);
  return sol;
}

/// Steady-state closed-loop state under the law built from P and the
/// steady feedforward, for a sinusoidal reference: x = Xs sin(wt) + Xc cos(wt),
///   A_cl Xs + w Xc = -M Gs,   -w Xs + A_cl Xc = -M Gc.
struct SinusoidalResponse {
  Eigen::VectorXd xs;
  Eigen::VectorXd xc;
  double omega = 0.0;
  /// sqrt of the period average of |z - C x|^2.
  double tracking_rms = 0.0;
};

inline SinusoidalResponse steady_state_response(const LqProblem& problem, const Eigen::MatrixXd& p,
                                                const SteadyFeedforward& ff) {
  if (ff.kind != ReferenceSignal::Kind::Sinusoid) {
    throw Error(ErrorCode::InvalidArgument, "steady_state_response: needs a sinusoidal reference");
  }
  const double t0 = problem.horizon.t0();
  const Eigen::MatrixXd a_cl = tracking_detail::closed_loop(problem, p, t0);
  const Eigen::MatrixXd m = problem.control_coupling(t0);
  const Eigen::Index n = problem.n();
  const double om = ff.omega;
  Eigen::MatrixXd big(2 * n, 2 * n);
  big << a_cl, om * Eigen::MatrixXd::Identity(n, n), -om * Eigen::MatrixXd::Identity(n, n), a_cl;
  Eigen::VectorXd rhs(2 * n);
  rhs << -(m * ff.gs), -(m * ff.gc);
  const Eigen::VectorXd sol = big.partialPivLu().solve(rhs);
  SinusoidalResponse r;
  r.xs = sol.head(n);
  r.xc = sol.tail(n);
  r.omega = om;
  const Eigen::MatrixXd c = problem.C.eval(t0);
  const Eigen::VectorXd es = problem.reference.vector() - c * r.xs;
  const Eigen::VectorXd ec = -(c * r.xc);
  r.tracking_rms = std::sqrt(0.5 * (es.squaredNorm() + ec.squaredNorm()));
  return r;
}

/// Scalar tracking data x' = a x + b u, y = c x, weights m (error) and n (input).
struct ScalarTrackingData {
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  double m = 1.0;
  double n = 1.0;
  double alpha = 0.0;
  double omega = 0.0;
};

struct SinCosPair {
  double sin_coeff = 0.0;
  double cos_coeff = 0.0;
};

/// g(t) = beta [-(a n - p b^2) sin(wt) + n w cos(wt)],
/// beta = alpha c m n / ((n a - b^2 p)^2 + n^2 w^2).
inline SinCosPair sinusoid_feedforward_closed_form(const ScalarTrackingData& d, double p) {
  const double exponent = d.a - p * d.b * d.b / d.n;
  if (!(exponent < 0.0)) {
    throw Error(ErrorCode::UnstableExponent,
                "sinusoid_feedforward_closed_form: a - p b^2 / n = " + std::to_string(exponent) + " is not negative");
  }
  const double lead = d.n * d.a - d.b * d.b * p;
  const double beta = d.alpha * d.c * d.m * d.n / (lead * lead + d.n * d.n * d.omega * d.omega);
  return {-beta * lead, beta * d.n * d.omega};
}

}  // namespace krotov
