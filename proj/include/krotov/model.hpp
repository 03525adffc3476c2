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
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "krotov/error.hpp"

namespace krotov {

/// phi(t) = scale / (t + shift). The only time-varying family the library
/// knows; scale = -1, shift = 1 gives the -1/(t+1) drift of the LTV examples.
struct ReciprocalShift {
  double scale = 1.0;
  double shift = 1.0;

  [[nodiscard]] double value(double t) const { return scale / (t + shift); }
  [[nodiscard]] double slope(double t) const { return -scale / ((t + shift) * (t + shift)); }
  [[nodiscard]] bool singular_at(double t) const { return std::abs(t + shift) < 1e-300; }
};

/// Matrix-valued function of time: either constant, or a constant
/// coefficient matrix scaled by a reciprocal-shift profile.
class TimeMatrix {
 public:
  TimeMatrix() = default;

  static TimeMatrix constant(Eigen::MatrixXd value) {
    TimeMatrix tm;
    tm.coeff_ = std::move(value);
    return tm;
  }

  static TimeMatrix scaled(Eigen::MatrixXd coeff, ReciprocalShift profile) {
    TimeMatrix tm;
    tm.coeff_ = std::move(coeff);
    tm.profile_ = profile;
    return tm;
  }

  [[nodiscard]] Eigen::Index rows() const { return coeff_.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return coeff_.cols(); }
  [[nodiscard]] bool is_constant() const { return !profile_.has_value(); }
  [[nodiscard]] const Eigen::MatrixXd& coefficient() const { return coeff_; }
  [[nodiscard]] const std::optional<ReciprocalShift>& profile() const { return profile_; }

  [[nodiscard]] Eigen::MatrixXd eval(double t) const {
    if (!profile_) return coeff_;
    check_regular(t);
    return profile_->value(t) * coeff_;
  }

  [[nodiscard]] Eigen::MatrixXd derivative(double t) const {
    if (!profile_) return Eigen::MatrixXd::Zero(coeff_.rows(), coeff_.cols());
    check_regular(t);
    return profile_->slope(t) * coeff_;
  }

 private:
  void check_regular(double t) const {
    if (!std::isfinite(t)) {
      throw Error(ErrorCode::InvalidArgument, "eval_time_matrix: t must be finite");
    }
    if (profile_->singular_at(t)) {
      throw Error(ErrorCode::ProfileSingularity,
                  "eval_time_matrix: reciprocal-shift profile undefined at t=" + std::to_string(t));
    }
  }

  Eigen::MatrixXd coeff_;
  std::optional<ReciprocalShift> profile_;
};

inline Eigen::MatrixXd eval_time_matrix(const TimeMatrix& tm, double t) { return tm.eval(t); }

/// Desired output trajectory z(t).
class ReferenceSignal {
 public:
  enum class Kind { Zero, Constant, Ramp, Sinusoid };

  ReferenceSignal() = default;

  static ReferenceSignal zero(Eigen::Index dim) {
    ReferenceSignal r;
    r.kind_ = Kind::Zero;
    r.vec_ = Eigen::VectorXd::Zero(dim);
    return r;
  }
  static ReferenceSignal constant(Eigen::VectorXd value) {
    ReferenceSignal r;
    r.kind_ = Kind::Constant;
    r.vec_ = std::move(value);
    return r;
  }
  /// z(t) = slope * t.
  static ReferenceSignal ramp(Eigen::VectorXd slope) {
    ReferenceSignal r;
    r.kind_ = Kind::Ramp;
    r.vec_ = std::move(slope);
    return r;
  }
  /// z(t) = amplitude * sin(omega * t), omega in rad/s.
  static ReferenceSignal sinusoid(Eigen::VectorXd amplitude, double omega) {
    ReferenceSignal r;
    r.kind_ = Kind::Sinusoid;
    r.vec_ = std::move(amplitude);
    r.omega_ = omega;
    return r;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] Eigen::Index dimension() const { return vec_.size(); }
  /// Constant value, ramp slope or sinusoid amplitude, depending on kind().
  [[nodiscard]] const Eigen::VectorXd& vector() const { return vec_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] bool is_zero() const { return kind_ == Kind::Zero || vec_.isZero(0.0); }

  [[nodiscard]] Eigen::VectorXd eval(double t) const {
    switch (kind_) {
      case Kind::Zero: return Eigen::VectorXd::Zero(vec_.size());
      case Kind::Constant: return vec_;
      case Kind::Ramp: return vec_ * t;
      case Kind::Sinusoid: return vec_ * std::sin(omega_ * t);
    }
    return vec_;
  }

 private:
  Kind kind_ = Kind::Zero;
  Eigen::VectorXd vec_;
  double omega_ = 0.0;
};

inline Eigen::VectorXd eval_reference(const ReferenceSignal& z, double t) { return z.eval(t); }

class Horizon {
 public:
  static Horizon finite(double t0, double tf) { return Horizon(t0, tf); }
  static Horizon infinite(double t0) { return Horizon(t0, std::nullopt); }

  [[nodiscard]] double t0() const { return t0_; }
  [[nodiscard]] bool is_finite() const { return tf_.has_value(); }
  /// Final time; +inf for infinite horizons.
  [[nodiscard]] double tf() const { return tf_.value_or(std::numeric_limits<double>::infinity()); }
  [[nodiscard]] bool contains(double t, double slack = 1e-9) const {
    const double pad = slack * std::max(1.0, std::abs(t0_) + (tf_ ? std::abs(*tf_) : 0.0));
    return t >= t0_ - pad && (!tf_ || t <= *tf_ + pad);
  }

 private:
  Horizon(double t0, std::optional<double> tf) : t0_(t0), tf_(tf) {}

  double t0_ = 0.0;
  std::optional<double> tf_;
};

enum class ProblemKind { Regulation, Tracking };

/// Linear-quadratic regulation or tracking problem
///
///   J = cost_scale * [ e(tf)' F e(tf) + int_{t0}^{tf} e' Q e + u' R u dt ],
///   x' = A(t) x + B(t) u,   y = C x,   e = z - y  (e = -x for regulation).
///
/// Q and F are output-space weights (p x p) for tracking; the state-space
/// weight is C' Q C.
struct LqProblem {
  ProblemKind kind = ProblemKind::Regulation;
  TimeMatrix A;
  TimeMatrix B;
  TimeMatrix C;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  Eigen::MatrixXd F;
  Horizon horizon = Horizon::infinite(0.0);
  Eigen::VectorXd x0;
  ReferenceSignal reference;
  double cost_scale = 0.5;

  [[nodiscard]] Eigen::Index n() const { return A.rows(); }
  [[nodiscard]] Eigen::Index m() const { return B.cols(); }
  [[nodiscard]] Eigen::Index p() const { return C.rows(); }
  [[nodiscard]] bool is_tracking() const { return kind == ProblemKind::Tracking; }
  [[nodiscard]] bool is_time_invariant() const {
    return A.is_constant() && B.is_constant() && C.is_constant();
  }

  /// Q (regulation) or C' Q C (tracking).
  [[nodiscard]] Eigen::MatrixXd state_weight(double t) const {
    if (!is_tracking()) return Q;
    const Eigen::MatrixXd c = C.eval(t);
    return c.transpose() * Q * c;
  }
  /// F (regulation) or C(tf)' F C(tf) (tracking); the terminal value of P.
  [[nodiscard]] Eigen::MatrixXd terminal_state_weight() const {
    if (!is_tracking()) return F;
    const Eigen::MatrixXd c = C.eval(horizon.tf());
    return c.transpose() * F * c;
  }
  /// B R^-1 B'.
  [[nodiscard]] Eigen::MatrixXd control_coupling(double t) const {
    const Eigen::MatrixXd b = B.eval(t);
    return b * R.ldlt().solve(b.transpose());
  }
  /// The linear forcing C' Q z(t) of the tracking equations; zero for regulation.
  [[nodiscard]] Eigen::VectorXd reference_forcing(double t) const {
    if (!is_tracking()) return Eigen::VectorXd::Zero(n());
    return C.eval(t).transpose() * Q * reference.eval(t);
  }
  /// Un-scaled running cost e' Q e + u' R u.
  [[nodiscard]] double running_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double t) const {
    return output_error_cost(x, t) + u.dot(R * u);
  }
  /// Un-scaled terminal cost e(tf)' F e(tf).
  [[nodiscard]] double terminal_cost(const Eigen::VectorXd& x) const {
    if (!is_tracking()) return x.dot(F * x);
    const Eigen::VectorXd e = reference.eval(horizon.tf()) - C.eval(horizon.tf()) * x;
    return e.dot(F * e);
  }

 private:
  [[nodiscard]] double output_error_cost(const Eigen::VectorXd& x, double t) const {
    if (!is_tracking()) return x.dot(Q * x);
    const Eigen::VectorXd e = reference.eval(t) - C.eval(t) * x;
    return e.dot(Q * e);
  }
};

inline constexpr double kWeightEigTol = 1e-10;

namespace detail {

inline double min_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline void require_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string("validate_problem: ") + name + " is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

inline void require_symmetric(const Eigen::MatrixXd& m, ErrorCode code, const char* name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(code, std::string("validate_problem: ") + name + " is not symmetric");
  }
}

inline void require_profile_regular(const TimeMatrix& tm, const Horizon& h, const char* name) {
  if (!tm.profile()) return;
  const double shift = tm.profile()->shift;
  const double a = h.t0() + shift;
  const double b = h.is_finite() ? h.tf() + shift : a;
  if (a * b <= 0.0 || (!h.is_finite() && a <= 0.0)) {
    throw Error(ErrorCode::ProfileSingularity,
                std::string("validate_problem: profile of ") + name + " is singular on the horizon");
  }
}

}  // namespace detail

/// Checks every LqProblem invariant and returns the problem unchanged.
inline LqProblem validate_problem(const LqProblem& raw) {
  using detail::require_shape;
  const Eigen::Index n = raw.A.rows();
  if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "validate_problem: A is empty");
  require_shape(raw.A.coefficient(), n, n, "A");
  if (raw.B.rows() != n || raw.B.cols() <= 0) {
    require_shape(raw.B.coefficient(), n, std::max<Eigen::Index>(raw.B.cols(), 1), "B");
  }
  const Eigen::Index m = raw.B.cols();
  if (raw.C.cols() != n || raw.C.rows() <= 0) {
    require_shape(raw.C.coefficient(), std::max<Eigen::Index>(raw.C.rows(), 1), n, "C");
  }
  const Eigen::Index p = raw.C.rows();
  if (!raw.is_tracking()) {
    if (p != n || !raw.C.is_constant() || !raw.C.coefficient().isIdentity(0.0)) {
      throw Error(ErrorCode::InvalidArgument, "validate_problem: regulation problems use C = I");
    }
    if (!raw.reference.is_zero()) {
      throw Error(ErrorCode::InvalidArgument, "validate_problem: regulation problems use a zero reference");
    }
  }
  require_shape(raw.Q, p, p, "Q");
  require_shape(raw.R, m, m, "R");
  require_shape(raw.F, p, p, "F");
  if (raw.x0.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "validate_problem: x0 has length " +
                                                  std::to_string(raw.x0.size()) + ", expected " +
                                                  std::to_string(n));
  }
  if (raw.reference.dimension() != p) {
    throw Error(ErrorCode::DimensionMismatch, "validate_problem: reference dimension " +
                                                  std::to_string(raw.reference.dimension()) +
                                                  " differs from output dimension " + std::to_string(p));
  }
  if (!raw.x0.allFinite() || !raw.Q.allFinite() || !raw.R.allFinite() || !raw.F.allFinite() ||
      !raw.A.coefficient().allFinite() || !raw.B.coefficient().allFinite() ||
      !raw.C.coefficient().allFinite() || !raw.reference.vector().allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "validate_problem: non-finite entries");
  }

  detail::require_symmetric(raw.R, ErrorCode::NonPdWeight, "R");
  detail::require_symmetric(raw.Q, ErrorCode::NonPsdWeight, "Q");
  detail::require_symmetric(raw.F, ErrorCode::NonPsdWeight, "F");
  if (detail::min_symmetric_eigenvalue(raw.R) <= kWeightEigTol) {
    throw Error(ErrorCode::NonPdWeight, "validate_problem: R is not positive definite");
  }
  if (detail::min_symmetric_eigenvalue(raw.Q) < -kWeightEigTol) {
    throw Error(ErrorCode::NonPsdWeight, "validate_problem: Q is not positive semidefinite");
  }
  if (detail::min_symmetric_eigenvalue(raw.F) < -kWeightEigTol) {
    throw Error(ErrorCode::NonPsdWeight, "validate_problem: F is not positive semidefinite");
  }

  const Horizon& h = raw.horizon;
  if (!std::isfinite(h.t0())) throw Error(ErrorCode::InvalidHorizon, "validate_problem: t0 must be finite");
  if (h.is_finite() && !(h.tf() > h.t0())) {
    throw Error(ErrorCode::InvalidHorizon, "validate_problem: tf must exceed t0");
  }
  if (!h.is_finite()) {
    if (!raw.F.isZero(0.0)) {
      throw Error(ErrorCode::InfiniteHorizonWithTerminalCost,
                  "validate_problem: infinite horizon requires F = 0");
    }
    if (!raw.is_time_invariant()) {
      throw Error(ErrorCode::TimeVaryingInfiniteHorizon,
                  "validate_problem: infinite horizon requires constant A, B, C");
    }
  }
  detail::require_profile_regular(raw.A, h, "A");
  detail::require_profile_regular(raw.B, h, "B");
  detail::require_profile_regular(raw.C, h, "C");
  if (!(raw.cost_scale > 0.0) || !std::isfinite(raw.cost_scale)) {
    throw Error(ErrorCode::InvalidArgument, "validate_problem: cost_scale must be positive");
  }
  return raw;
}

}  // namespace krotov
