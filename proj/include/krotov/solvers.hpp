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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/linalg.hpp"
#include "krotov/model.hpp"
#include "krotov/ode.hpp"
#include "krotov/path.hpp"

namespace krotov {

/// The split quadratic term 1/2 P M P + 1/4 P M P' + 1/4 P' M P with
/// M = B R^-1 B'. Equals P M P when P is symmetric.
inline Eigen::MatrixXd split_quadratic(const Eigen::MatrixXd& p, const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd mp = m * p;
  const Eigen::MatrixXd mpt = m * p.transpose();
  return 0.5 * p * mp + 0.25 * p * mpt + 0.25 * p.transpose() * mp;
}

struct GeneralizedResidual {
  Eigen::MatrixXd value;
};

/// Pdot + P A + A' P + Q_eff - split_quadratic(P, B R^-1 B') at time t.
inline GeneralizedResidual generalized_residual(const LqProblem& problem, const Eigen::MatrixXd& p,
                                                const Eigen::MatrixXd& p_dot, double t) {
  const Eigen::MatrixXd a = problem.A.eval(t);
  Eigen::MatrixXd r = p * a + a.transpose() * p + problem.state_weight(t) -
                      split_quadratic(p, problem.control_coupling(t));
  if (p_dot.size() != 0) r += p_dot;
  return {std::move(r)};
}

/// Pdot + P A + A' P + Q_eff - P B R^-1 B' P (the classical Riccati residual).
inline Eigen::MatrixXd classical_residual(const LqProblem& problem, const Eigen::MatrixXd& p,
                                          const Eigen::MatrixXd& p_dot, double t) {
  const Eigen::MatrixXd a = problem.A.eval(t);
  Eigen::MatrixXd r =
      p * a + a.transpose() * p + problem.state_weight(t) - p * problem.control_coupling(t) * p;
  if (p_dot.size() != 0) r += p_dot;
  return r;
}

/// Feedback u(x, t) = -K(t) x + u_ff(t).
struct ControlLaw {
  MatrixPath K;
  VectorPath u_ff;

  [[nodiscard]] Eigen::VectorXd operator()(const Eigen::VectorXd& x, double t) const {
    return -K(t) * x + u_ff(t);
  }
};

/// K = 1/2 R^-1 B' (P + P'), u_ff = R^-1 B' g. Sampled inputs give sampled
/// outputs on the same grid, with exact node derivatives when P and g carry them.
inline ControlLaw gain_from_P(const LqProblem& problem, const MatrixPath& p,
                              const std::optional<VectorPath>& g = std::nullopt) {
  const Eigen::Index m = problem.m();
  const auto ldlt = problem.R.ldlt();
  // Captures are by value: the function-path variants outlive `problem`.
  const TimeMatrix b = problem.B;
  const auto gain_at = [b, ldlt](const Eigen::MatrixXd& pv, double t) -> Eigen::MatrixXd {
    return ldlt.solve(b.eval(t).transpose() * (pv + pv.transpose())) * 0.5;
  };
  const auto gain_rate = [b, ldlt](const Eigen::MatrixXd& pv, const Eigen::MatrixXd& dp,
                                   double t) -> Eigen::MatrixXd {
    const Eigen::MatrixXd s = pv + pv.transpose();
    const Eigen::MatrixXd ds = dp + dp.transpose();
    return ldlt.solve(b.derivative(t).transpose() * s + b.eval(t).transpose() * ds) * 0.5;
  };

  ControlLaw law;
  if (p.is_constant() && problem.B.is_constant()) {
    law.K = MatrixPath::constant(gain_at(p(problem.horizon.t0()), problem.horizon.t0()));
  } else if (p.is_sampled()) {
    const auto& t = p.times();
    std::vector<Eigen::MatrixXd> k(t.size());
    std::vector<Eigen::MatrixXd> dk;
    for (std::size_t i = 0; i < t.size(); ++i) k[i] = gain_at(p.samples()[i], t[i]);
    if (p.has_exact_derivatives()) {
      dk.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) dk[i] = gain_rate(p.samples()[i], p.node_derivatives()[i], t[i]);
    }
    law.K = MatrixPath::sampled(t, std::move(k), std::move(dk));
  } else {
    law.K = MatrixPath::function([p, gain_at](double t) { return gain_at(p(t), t); });
  }

  if (!g) {
    law.u_ff = VectorPath::constant(Eigen::VectorXd::Zero(m));
    return law;
  }
  const auto ff_at = [b, ldlt](const Eigen::VectorXd& gv, double t) -> Eigen::VectorXd {
    return ldlt.solve(b.eval(t).transpose() * gv);
  };
  if (g->is_constant() && problem.B.is_constant()) {
    law.u_ff = VectorPath::constant(ff_at((*g)(problem.horizon.t0()), problem.horizon.t0()));
  } else if (g->is_sampled()) {
    const auto& t = g->times();
    std::vector<Eigen::VectorXd> v(t.size());
    std::vector<Eigen::VectorXd> dv;
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = ff_at(g->samples()[i], t[i]);
    if (g->has_exact_derivatives()) {
      dv.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        dv[i] = ldlt.solve(problem.B.derivative(t[i]).transpose() * g->samples()[i] +
                           problem.B.eval(t[i]).transpose() * g->node_derivatives()[i]);
      }
    }
    law.u_ff = VectorPath::sampled(t, std::move(v), std::move(dv));
  } else {
    const VectorPath gp = *g;
    law.u_ff = VectorPath::function([gp, ff_at](double t) { return ff_at(gp(t), t); },
                                    [gp, b, ldlt](double t) -> Eigen::VectorXd {
                                      return ldlt.solve(b.derivative(t).transpose() * gp(t) +
                                                        b.eval(t).transpose() * gp.derivative(t));
                                    });
  }
  return law;
}

namespace solver_detail {

inline std::vector<double> finite_grid(const LqProblem& problem, double dt, const char* who) {
  if (!problem.horizon.is_finite()) {
    throw Error(ErrorCode::InfiniteHorizon, std::string(who) + ": requires a finite horizon");
  }
  return uniform_grid(problem.horizon.t0(), problem.horizon.tf(), dt);
}

}  // namespace solver_detail

/// Backward RK4 sweep of Pdot = -(P A + A' P + Q_eff - split_quadratic(P, M))
/// from P(tf) = F (C' F C for tracking). The result carries the right-hand
/// side at every node.
inline MatrixPath integrate_mdre(const LqProblem& problem, double dt) {
  const auto grid = solver_detail::finite_grid(problem, dt, "integrate_mdre");
  const auto rhs = [&problem](double t, const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
    return -generalized_residual(problem, p, Eigen::MatrixXd(), t).value;
  };
  return integrate_backward<Eigen::MatrixXd>(rhs, grid, problem.terminal_state_weight(), "integrate_mdre");
}

/// The classical matrix differential Riccati equation, same grid and terminal value.
inline MatrixPath integrate_standard_mdre(const LqProblem& problem, double dt) {
  const auto grid = solver_detail::finite_grid(problem, dt, "integrate_standard_mdre");
  const auto rhs = [&problem](double t, const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
    return -classical_residual(problem, p, Eigen::MatrixXd(), t);
  };
  return integrate_backward<Eigen::MatrixXd>(rhs, grid, problem.terminal_state_weight(),
                                             "integrate_standard_mdre");
}

/// Stabilizing solution of A' X + X A + Q_eff - X M X = 0 from the stable
/// invariant subspace of the Hamiltonian [[A, -M], [-Q_eff, -A']], refined
/// by two Newton-Kleinman steps.
inline Eigen::MatrixXd solve_standard_are(const LqProblem& problem) {
  if (problem.horizon.is_finite() || !problem.is_time_invariant()) {
    throw Error(ErrorCode::InvalidArgument, "solve_standard_are: requires an infinite-horizon LTI problem");
  }
  const double t0 = problem.horizon.t0();
  const Eigen::MatrixXd a = problem.A.eval(t0);
  const Eigen::MatrixXd m = problem.control_coupling(t0);
  const Eigen::MatrixXd q = problem.state_weight(t0);
  const Eigen::Index n = a.rows();

  Eigen::MatrixXd h(2 * n, 2 * n);
  h << a, -m, -q, -a.transpose();
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(h);
  const double axis_tol = 1e-11 * std::max(1.0, max_abs(h));
  Eigen::MatrixXcd basis(2 * n, n);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (es.eigenvalues()(i).real() < -axis_tol) {
      if (found == n) break;
      basis.col(found++) = es.eigenvectors().col(i);
    }
  }
  if (found != n) {
    throw Error(ErrorCode::NotStabilizable,
                "solve_standard_are: Hamiltonian has " + std::to_string(found) + " stable eigenvalues, need " +
                    std::to_string(n));
  }
  const Eigen::MatrixXcd top = basis.topRows(n);
  const Eigen::MatrixXcd bottom = basis.bottomRows(n);
  Eigen::MatrixXd x = symmetric_part((bottom * top.fullPivLu().inverse()).real());
  if (!x.allFinite()) throw Error(ErrorCode::NotStabilizable, "solve_standard_are: singular invariant basis");

  for (int k = 0; k < 2; ++k) {
    const Eigen::MatrixXd closed = a - m * x;
    if (!is_hurwitz(closed)) break;
    const Eigen::MatrixXd next = symmetric_part(solve_lyapunov(closed, q + x * m * x));
    if (!next.allFinite()) break;
    if (max_abs(classical_residual(problem, next, {}, t0)) >= max_abs(classical_residual(problem, x, {}, t0))) {
      break;
    }
    x = next;
  }
  return x;
}

struct AlgebraicSolution {
  Eigen::MatrixXd P;
  double residual_norm = 0.0;       ///< max-abs entry of the generalized residual
  bool symmetric = false;           ///< ||P - P'||_inf < 1e-8
  bool spd_symmetric_part = false;  ///< P + P' positive definite (min eig > 1e-9)
  bool closed_loop_stable = false;  ///< A - 1/2 M (P + P') Hurwitz
};

struct SolutionSet {
  std::vector<AlgebraicSolution> solutions;
  int starts = 0;     ///< initial guesses tried
  int converged = 0;  ///< guesses whose Newton run met the residual tolerance
};

struct EnumerationOptions {
  int n_starts = 200;
  std::uint64_t seed = 0;
  double residual_tol = 1e-8;
  double dedup_tol = 1e-6;
  int max_iter = 100;
  /// Adds the Hamiltonian ARE solution to the deterministic starts.
  bool seed_with_are = true;
};

/// Classifies a candidate solution of the generalized algebraic equation.
inline AlgebraicSolution classify_solution(const LqProblem& problem, const Eigen::MatrixXd& p) {
  const double t0 = problem.horizon.t0();
  AlgebraicSolution s;
  s.P = p;
  s.residual_norm = max_abs(generalized_residual(problem, p, {}, t0).value);
  const Eigen::MatrixXd sym = p + p.transpose();
  s.symmetric = max_abs(p - p.transpose()) < 1e-8;
  s.spd_symmetric_part = min_eig_symmetric_part(sym) > 1e-9;
  s.closed_loop_stable = is_hurwitz(problem.A.eval(t0) - 0.5 * problem.control_coupling(t0) * sym);
  return s;
}

namespace solver_detail {

// Uniform in [-1, 1) from the raw 64-bit engine output, identical on every platform.
inline double symmetric_uniform(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

struct NewtonResult {
  Eigen::MatrixXd p;
  double residual = std::numeric_limits<double>::infinity();
};

// Newton's method on vec(P) -> vec(generalized residual) with an analytic
// Jacobian and step halving.
inline NewtonResult newton_generalized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m,
                                       const Eigen::MatrixXd& q, Eigen::MatrixXd p, int max_iter,
                                       double tol) {
  const Eigen::Index n = a.rows();
  const auto residual = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    return x * a + a.transpose() * x + q - split_quadratic(x, m);
  };
  Eigen::MatrixXd r = residual(p);
  double norm = r.norm();
  int polish = 0;
  Eigen::MatrixXd jac(n * n, n * n);
  for (int iter = 0; iter < max_iter && polish < 3; ++iter) {
    if (max_abs(r) < tol) ++polish;
    const Eigen::MatrixXd mp = m * p;
    const Eigen::MatrixXd mpt = m * p.transpose();
    const Eigen::MatrixXd pm = p * m;
    const Eigen::MatrixXd ptm = p.transpose() * m;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        // Directional derivative along the unit matrix E_ij.
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        d.row(i) += a.row(j);                      // E A
        d.col(j) += a.transpose().col(i);          // A' E
        d.row(i) -= 0.5 * mp.row(j);               // -1/2 E M P
        d.col(j) -= 0.5 * pm.col(i);                // -1/2 P M E
        d.row(i) -= 0.25 * mpt.row(j);             // -1/4 E M P'
        d.col(i) -= 0.25 * pm.col(j);               // -1/4 P M E'
        d.col(j) -= 0.25 * ptm.col(i);       // -1/4 P' M E
        d.row(j) -= 0.25 * mp.row(i);              // -1/4 E' M P
        jac.col(j * n + i) = Eigen::Map<const Eigen::VectorXd>(d.data(), n * n);
      }
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-Eigen::Map<const Eigen::VectorXd>(r.data(), n * n));
    if (!step.allFinite()) break;
    const Eigen::MatrixXd delta = Eigen::Map<const Eigen::MatrixXd>(step.data(), n, n);
    double alpha = 1.0;
    Eigen::MatrixXd trial = p + delta;
    Eigen::MatrixXd trial_r = residual(trial);
    while (!(trial_r.norm() < norm) && alpha > 1e-6) {
      alpha *= 0.5;
      trial = p + alpha * delta;
      trial_r = residual(trial);
    }
    if (!(trial_r.norm() < norm)) break;
    p = std::move(trial);
    r = std::move(trial_r);
    norm = r.norm();
    if (!p.allFinite() || max_abs(p) > kBlowupThreshold) break;
  }
  return {std::move(p), max_abs(r)};
}

}  // namespace solver_detail

/// Enumerates solutions of the generalized algebraic equation
///   P A + A' P + Q_eff - 1/2 P M P - 1/4 P M P' - 1/4 P' M P = 0
/// by multistart Newton: the zero matrix, the classical ARE solution, then
/// `n_starts` random matrices with entries uniform in [-s, s].
/// Enumeration is probabilistic; every stored solution is re-verified.
inline SolutionSet solve_algebraic(const LqProblem& problem, const EnumerationOptions& opts = {}) {
  if (problem.horizon.is_finite() || !problem.is_time_invariant()) {
    throw Error(ErrorCode::InvalidArgument, "solve_algebraic: requires an infinite-horizon LTI problem");
  }
  const double t0 = problem.horizon.t0();
  const Eigen::MatrixXd a = problem.A.eval(t0);
  const Eigen::MatrixXd m = problem.control_coupling(t0);
  const Eigen::MatrixXd q = problem.state_weight(t0);
  const Eigen::Index n = a.rows();

  std::vector<Eigen::MatrixXd> starts;
  starts.push_back(Eigen::MatrixXd::Zero(n, n));
  if (opts.seed_with_are) {
    try {
      starts.push_back(solve_standard_are(problem));
    } catch (const Error&) {
      // not stabilizable: nothing to seed with
    }
  }
  std::mt19937_64 rng(opts.seed);
  const double scale = 1.0 + a.norm() + q.norm();
  for (int k = 0; k < opts.n_starts; ++k) {
    // Magnitudes cycle through 1, 4, 16, 64 times the problem scale.
    const double s = scale * std::ldexp(1.0, 2 * (k % 4));
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) p(i, j) = s * solver_detail::symmetric_uniform(rng);
    }
    starts.push_back(std::move(p));
  }

  SolutionSet set;
  for (const auto& start : starts) {
    ++set.starts;
    auto result = solver_detail::newton_generalized(a, m, q, start, opts.max_iter, opts.residual_tol);
    if (!(result.residual < opts.residual_tol)) continue;
    ++set.converged;
    const bool duplicate = std::any_of(set.solutions.begin(), set.solutions.end(), [&](const auto& s) {
      return max_abs(s.P - result.p) < opts.dedup_tol;
    });
    if (duplicate) continue;
    auto sol = classify_solution(problem, result.p);
    if (sol.residual_norm < opts.residual_tol) set.solutions.push_back(std::move(sol));
  }
  if (set.solutions.empty()) {
    throw Error(ErrorCode::NoSolutionFound,
                "solve_algebraic: none of " + std::to_string(set.starts) + " starts converged");
  }
  return set;
}

struct StabilizingSelection {
  ControlLaw law;
  AlgebraicSolution chosen;
  std::vector<std::size_t> qualifiers;  ///< indices into the SolutionSet
};

/// Picks a solution with P + P' positive definite and a Hurwitz closed loop;
/// ties go to the smallest trace(P + P').
inline StabilizingSelection select_stabilizing(const SolutionSet& set, const LqProblem& problem) {
  StabilizingSelection sel;
  for (std::size_t i = 0; i < set.solutions.size(); ++i) {
    const auto& s = set.solutions[i];
    if (s.spd_symmetric_part && s.closed_loop_stable) sel.qualifiers.push_back(i);
  }
  if (sel.qualifiers.empty()) {
    throw Error(ErrorCode::NoStabilizingSolution,
                "select_stabilizing: no solution with P + P' > 0 and a stable closed loop");
  }
  const auto best = std::min_element(sel.qualifiers.begin(), sel.qualifiers.end(), [&](auto i, auto j) {
    return set.solutions[i].P.trace() < set.solutions[j].P.trace();
  });
  sel.chosen = set.solutions[*best];
  sel.law = gain_from_P(problem, MatrixPath::constant(sel.chosen.P));
  return sel;
}

}  // namespace krotov
