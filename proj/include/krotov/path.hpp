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
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"

namespace krotov {

/// Uniform nodes from t0 to tf (both included) with spacing at most dt.
/// The last node equals tf exactly.
inline std::vector<double> uniform_grid(double t0, double tf, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "uniform_grid: dt must be positive");
  }
  if (!(tf > t0)) {
    throw Error(ErrorCode::InvalidHorizon, "uniform_grid: tf must exceed t0");
  }
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((tf - t0) / dt - 1e-9)));
  const double h = (tf - t0) / static_cast<double>(steps);
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) grid[i] = t0 + static_cast<double>(i) * h;
  grid[steps] = tf;
  return grid;
}

/// Fornberg weights of the first derivative at `x0` for samples at `nodes`.
inline std::vector<double> first_derivative_weights(double x0, std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  // c[j][k]: weight of node j for the k-th derivative, k in {0, 1}.
  std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = c[j][1];
  return w;
}

/// Fourth-order finite-difference derivative of sampled data at node `i`
/// (five-point stencil, shifted one-sided near the ends).
template <class Value>
Value finite_difference_at(const std::vector<double>& t, const std::vector<Value>& v, std::size_t i) {
  const std::size_t count = t.size();
  if (count < 2) return Value::Zero(v[0].rows(), v[0].cols());
  const std::size_t width = std::min<std::size_t>(5, count);
  std::size_t first = i >= width / 2 ? i - width / 2 : 0;
  first = std::min(first, count - width);
  const auto w = first_derivative_weights(t[i], std::span<const double>(t.data() + first, width));
  Value d = Value::Zero(v[0].rows(), v[0].cols());
  for (std::size_t j = 0; j < width; ++j) d += w[j] * v[first + j];
  return d;
}

/// A time-indexed matrix or vector: a constant, samples on a strictly
/// increasing grid, or a callable.
///
/// Sampled paths interpolate with cubic Hermite segments. Node derivatives
/// come from `derivs` when the producer knows them (an ODE right-hand side);
/// otherwise they are estimated by fourth-order finite differences.
template <class Value>
class Path {
 public:
  using Fn = std::function<Value(double)>;

  Path() = default;

  static Path constant(Value v) {
    Path p;
    p.body_ = Constant{std::move(v)};
    return p;
  }

  static Path sampled(std::vector<double> t, std::vector<Value> v, std::vector<Value> derivs = {}) {
    if (t.empty() || t.size() != v.size()) {
      throw Error(ErrorCode::GridMismatch, "Path::sampled: grid and sample counts differ");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) {
        throw Error(ErrorCode::GridMismatch, "Path::sampled: grid not strictly increasing");
      }
    }
    Sampled s;
    s.exact_derivatives = !derivs.empty();
    if (s.exact_derivatives) {
      if (derivs.size() != v.size()) {
        throw Error(ErrorCode::GridMismatch, "Path::sampled: derivative count differs");
      }
      s.d = std::move(derivs);
    } else {
      s.d.reserve(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) s.d.push_back(finite_difference_at(t, v, i));
    }
    s.t = std::move(t);
    s.v = std::move(v);
    Path p;
    p.body_ = std::move(s);
    return p;
  }

  /// `df` may be empty, in which case derivatives use a central difference.
  static Path function(Fn f, Fn df = {}) {
    Path p;
    p.body_ = Callable{std::move(f), std::move(df)};
    return p;
  }

  [[nodiscard]] bool is_constant() const { return std::holds_alternative<Constant>(body_); }
  [[nodiscard]] bool is_sampled() const { return std::holds_alternative<Sampled>(body_); }
  [[nodiscard]] bool has_exact_derivatives() const {
    const auto* s = std::get_if<Sampled>(&body_);
    return s != nullptr && s->exact_derivatives;
  }

  Value operator()(double t) const {
    return std::visit(
        [&](const auto& b) -> Value {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, Constant>) {
            return b.value;
          } else if constexpr (std::is_same_v<B, Callable>) {
            return b.f(t);
          } else {
            const auto [i, s, h] = locate(b, t);
            if (h == 0.0) return b.v[i];
            const double s2 = s * s;
            const double s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * b.v[i] + (s3 - 2 * s2 + s) * h * b.d[i] +
                   (-2 * s3 + 3 * s2) * b.v[i + 1] + (s3 - s2) * h * b.d[i + 1];
          }
        },
        body_);
  }

  Value derivative(double t) const {
    return std::visit(
        [&](const auto& b) -> Value {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, Constant>) {
            return Value::Zero(b.value.rows(), b.value.cols());
          } else if constexpr (std::is_same_v<B, Callable>) {
            if (b.df) return b.df(t);
            const double h = 1e-4 * std::max(1.0, std::abs(t));
            return ((b.f(t + h) - b.f(t - h)) / (2.0 * h)).eval();
          } else {
            const auto [i, s, h] = locate(b, t);
            if (h == 0.0) return b.d[i];
            const double s2 = s * s;
            return ((6 * s2 - 6 * s) / h) * b.v[i] + (3 * s2 - 4 * s + 1) * b.d[i] +
                   ((-6 * s2 + 6 * s) / h) * b.v[i + 1] + (3 * s2 - 2 * s) * b.d[i + 1];
          }
        },
        body_);
  }

  /// Grid nodes of a sampled path; empty otherwise.
  [[nodiscard]] const std::vector<double>& times() const {
    static const std::vector<double> kEmpty;
    const auto* s = std::get_if<Sampled>(&body_);
    return s != nullptr ? s->t : kEmpty;
  }
  [[nodiscard]] const std::vector<Value>& samples() const {
    static const std::vector<Value> kEmpty;
    const auto* s = std::get_if<Sampled>(&body_);
    return s != nullptr ? s->v : kEmpty;
  }
  [[nodiscard]] const std::vector<Value>& node_derivatives() const {
    static const std::vector<Value> kEmpty;
    const auto* s = std::get_if<Sampled>(&body_);
    return s != nullptr ? s->d : kEmpty;
  }

 private:
  struct Constant {
    Value value;
  };
  struct Sampled {
    std::vector<double> t;
    std::vector<Value> v;
    std::vector<Value> d;
    bool exact_derivatives = false;
  };
  struct Callable {
    Fn f;
    Fn df;
  };

  struct Segment {
    std::size_t index;
    double s;
    double h;
  };

  // h == 0 marks an exact node hit (or a single-node grid).
  static Segment locate(const Sampled& b, double t) {
    const auto& g = b.t;
    const double span = g.back() - g.front();
    const double slack = 1e-9 * std::max(1.0, span);
    if (t < g.front() - slack || t > g.back() + slack) {
      throw Error(ErrorCode::OutOfHorizon, "Path: t=" + std::to_string(t) + " outside sampled grid [" +
                                               std::to_string(g.front()) + ", " +
                                               std::to_string(g.back()) + "]");
    }
    if (g.size() == 1 || t <= g.front()) return {0, 0.0, 0.0};
    if (t >= g.back()) return {g.size() - 1, 0.0, 0.0};
    const auto it = std::upper_bound(g.begin(), g.end(), t);
    const auto i = static_cast<std::size_t>(std::distance(g.begin(), it)) - 1;
    if (t == g[i]) return {i, 0.0, 0.0};
    const double h = g[i + 1] - g[i];
    return {i, (t - g[i]) / h, h};
  }

  std::variant<Constant, Sampled, Callable> body_;
};

using MatrixPath = Path<Eigen::MatrixXd>;
using VectorPath = Path<Eigen::VectorXd>;

}  // namespace krotov
