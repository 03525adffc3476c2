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
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "krotov/error.hpp"

namespace krotov {

inline Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

/// Smallest eigenvalue of (m + m') / 2.
inline double min_eig_symmetric_part(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Largest real part over the spectrum of a square matrix.
inline double spectral_abscissa(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

inline bool is_hurwitz(const Eigen::MatrixXd& a) { return spectral_abscissa(a) < 0.0; }

inline Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) { return a.exp(); }

/// Principal square root of a symmetric positive definite matrix by the
/// Denman-Beavers iteration. Throws NotSpd when the input is not symmetric
/// (1e-12) or has an eigenvalue <= 1e-10.
inline Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& r) {
  if (r.rows() != r.cols() || r.size() == 0) throw Error(ErrorCode::NotSpd, "spd_sqrt: matrix not square");
  if (max_abs(r - r.transpose()) > 1e-12) throw Error(ErrorCode::NotSpd, "spd_sqrt: matrix not symmetric");
  if (min_eig_symmetric_part(r) <= 1e-10) {
    throw Error(ErrorCode::NotSpd, "spd_sqrt: matrix not positive definite");
  }
  const Eigen::Index n = r.rows();
  Eigen::MatrixXd y = symmetric_part(r);
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::MatrixXd y_inv = y.partialPivLu().inverse();
    const Eigen::MatrixXd z_inv = z.partialPivLu().inverse();
    Eigen::MatrixXd y_next = 0.5 * (y + z_inv);
    z = 0.5 * (z + y_inv);
    const double change = max_abs(y_next - y);
    y = std::move(y_next);
    if (change <= 1e-15 * std::max(1.0, max_abs(y))) break;
  }
  return symmetric_part(y);
}

/// Solves A' X + X A + W = 0 through the Kronecker form (small n only).
inline Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(A' X) = (I kron A') vec(X),  vec(X A) = (A' kron I) vec(X), column-major.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += eye(i, j) * a.transpose();
      op.block(i * n, j * n, n, n) += a(j, i) * eye;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(w.data(), n * n);
  const Eigen::VectorXd x = op.fullPivLu().solve(rhs);
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
}

}  // namespace krotov
