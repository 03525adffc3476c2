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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/path.hpp"

namespace krotov {

/// One classical fourth-order Runge-Kutta step of y' = f(t, y). `h` may be
/// negative for backward sweeps.
template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

inline constexpr double kBlowupThreshold = 1e12;

template <class State>
bool exceeds_blowup(const State& y) {
  return !y.allFinite() || y.cwiseAbs().maxCoeff() > kBlowupThreshold;
}

/// Integrates backward from `terminal` at grid.back() to grid.front() and
/// returns the samples together with f evaluated at every node.
template <class State, class Rhs>
Path<State> integrate_backward(const Rhs& f, const std::vector<double>& grid, State terminal,
                               const std::string& who) {
  const std::size_t count = grid.size();
  std::vector<State> values(count);
  std::vector<State> derivs(count);
  values[count - 1] = std::move(terminal);
  derivs[count - 1] = f(grid[count - 1], values[count - 1]);
  for (std::size_t i = count - 1; i > 0; --i) {
    values[i - 1] = rk4_step(f, grid[i], values[i], grid[i - 1] - grid[i]);
    if (exceeds_blowup(values[i - 1])) {
      throw Error(ErrorCode::IntegrationBlowup,
                  who + ": solution exceeds 1e12 at t=" + std::to_string(grid[i - 1]));
    }
    derivs[i - 1] = f(grid[i - 1], values[i - 1]);
  }
  return Path<State>::sampled(grid, std::move(values), std::move(derivs));
}

}  // namespace krotov
