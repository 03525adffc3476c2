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

#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/model.hpp"

namespace krotov {

struct BuiltinExample {
  std::string id;
  std::string title;
  LqProblem problem;
  double dt = 1e-3;      ///< default integration step
  double t_end = 10.0;   ///< default simulation end
};

inline const std::vector<std::string>& builtin_ids() {
  static const std::vector<std::string> kIds = {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "krotov-demo"};
  return kIds;
}

namespace builtin_detail {

inline Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }
inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out(i++) = x;
  return out;
}
inline Eigen::MatrixXd mimo_a() { return (Eigen::MatrixXd(2, 2) << 0, 1, 1, 1).finished(); }
inline Eigen::MatrixXd mimo_b() { return (Eigen::MatrixXd(2, 2) << 1, 1, 0, 1).finished(); }
inline Eigen::MatrixXd mimo_r() { return vec({0.5, 0.25}).asDiagonal(); }

inline LqProblem regulation(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd q, Eigen::MatrixXd r,
                            Eigen::MatrixXd f, Horizon h, Eigen::VectorXd x0) {
  LqProblem p;
  p.kind = ProblemKind::Regulation;
  const Eigen::Index n = a.rows();
  p.A = TimeMatrix::constant(std::move(a));
  p.B = TimeMatrix::constant(std::move(b));
  p.C = TimeMatrix::constant(Eigen::MatrixXd::Identity(n, n));
  p.Q = std::move(q);
  p.R = std::move(r);
  p.F = std::move(f);
  p.horizon = h;
  p.x0 = std::move(x0);
  p.reference = ReferenceSignal::zero(n);
  return p;
}

}  // namespace builtin_detail

/// The worked examples: scalar infinite-horizon regulation (ex1), scalar
/// sinusoid tracking (ex2), scalar LTV regulation and ramp tracking (ex3,
/// ex4), the 2x2 MIMO regulation and tracking pair (ex5, ex6), and the
/// scalar problem of the iterative method (krotov-demo).
inline BuiltinExample builtin_example(const std::string& id) {
  using namespace builtin_detail;
  const double omega = 0.01 * std::numbers::pi;
  const ReciprocalShift decay{-1.0, 1.0};
  BuiltinExample ex;
  ex.id = id;
  if (id == "ex1") {
    ex.title = "scalar LQR, x' = -x + u, infinite horizon";
    ex.problem = regulation(scalar(-1), scalar(1), scalar(1), scalar(1), scalar(0), Horizon::infinite(0.0),
                            vec({1.0}));
  } else if (id == "ex2") {
    ex.title = "scalar LQT of a sinusoid, a=1 b=1 c=4 m=200 n=0.1, infinite horizon";
    LqProblem& p = ex.problem;
    p.kind = ProblemKind::Tracking;
    p.A = TimeMatrix::constant(scalar(1));
    p.B = TimeMatrix::constant(scalar(1));
    p.C = TimeMatrix::constant(scalar(4));
    p.Q = scalar(200);
    p.R = scalar(0.1);
    p.F = scalar(0);
    p.horizon = Horizon::infinite(0.0);
    p.x0 = vec({2.0});
    p.reference = ReferenceSignal::sinusoid(vec({0.5}), omega);
    ex.t_end = 400.0;
  } else if (id == "ex3") {
    ex.title = "scalar LTV LQR, x' = -x/(t+1) + u, tf = 5";
    ex.problem = regulation(scalar(1), scalar(1), scalar(1), scalar(1), scalar(1), Horizon::finite(0.0, 5.0),
                            vec({20.0}));
    ex.problem.A = TimeMatrix::scaled(scalar(1), decay);
    ex.t_end = 5.0;
  } else if (id == "ex4") {
    ex.title = "scalar LTV LQT of the ramp z = t, tf = 5";
    LqProblem& p = ex.problem;
    p.kind = ProblemKind::Tracking;
    p.A = TimeMatrix::scaled(scalar(1), decay);
    p.B = TimeMatrix::constant(scalar(1));
    p.C = TimeMatrix::constant(scalar(1));
    p.Q = scalar(1000);
    p.R = scalar(1);
    p.F = scalar(10);
    p.horizon = Horizon::finite(0.0, 5.0);
    p.x0 = vec({10.0});
    p.reference = ReferenceSignal::ramp(vec({1.0}));
    ex.t_end = 5.0;
  } else if (id == "ex5") {
    ex.title = "2x2 MIMO LQR, infinite horizon";
    ex.problem = regulation(mimo_a(), mimo_b(), vec({2, 4}).asDiagonal(), mimo_r(), Eigen::MatrixXd::Zero(2, 2),
                            Horizon::infinite(0.0), vec({10, 5}));
  } else if (id == "ex6") {
    ex.title = "2x2 MIMO LQT of z = (0, sin wt), infinite horizon";
    LqProblem& p = ex.problem;
    p.kind = ProblemKind::Tracking;
    p.A = TimeMatrix::constant(mimo_a());
    p.B = TimeMatrix::constant(mimo_b());
    p.C = TimeMatrix::constant(Eigen::MatrixXd::Identity(2, 2));
    p.Q = vec({200, 400}).asDiagonal();
    p.R = mimo_r();
    p.F = Eigen::MatrixXd::Zero(2, 2);
    p.horizon = Horizon::infinite(0.0);
    p.x0 = vec({5, 2});
    p.reference = ReferenceSignal::sinusoid(vec({0, 1}), omega);
    ex.t_end = 400.0;
  } else if (id == "krotov-demo") {
    ex.title = "iterative improvement, x' = -x + u, J = int_0^10 x^2 + u^2";
    ex.problem = regulation(scalar(-1), scalar(1), scalar(1), scalar(1), scalar(0), Horizon::finite(0.0, 10.0),
                            vec({5.0}));
    ex.problem.cost_scale = 1.0;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown example id '" + id + "'");
  }
  ex.problem = validate_problem(ex.problem);
  return ex;
}

}  // namespace krotov
