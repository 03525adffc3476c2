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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/model.hpp"

namespace krotov {

/// A simulated process. `running_cost` is already multiplied by the
/// problem's cost_scale.
struct Trajectory {
  std::vector<double> grid;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> inputs;
  std::vector<double> running_cost;
  double total_cost = 0.0;
  /// Bound on the cost beyond the last node (infinite horizons); 0 otherwise.
  double tail_bound = 0.0;
};

/// Throws GridMismatch unless `traj` is a consistent trajectory of `problem`.
inline void check_trajectory(const LqProblem& problem, const Trajectory& traj, const char* who) {
  const std::size_t count = traj.grid.size();
  const auto fail = [who](const std::string& what) {
    throw Error(ErrorCode::GridMismatch, std::string(who) + ": " + what);
  };
  if (count == 0) fail("empty trajectory");
  if (traj.states.size() != count || traj.inputs.size() != count) fail("state/input counts differ from grid");
  for (std::size_t i = 1; i < count; ++i) {
    if (!(traj.grid[i] > traj.grid[i - 1])) fail("grid not strictly increasing");
  }
  if (!problem.horizon.contains(traj.grid.front()) || !problem.horizon.contains(traj.grid.back())) {
    fail("grid leaves the horizon");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (traj.states[i].size() != problem.n() || traj.inputs[i].size() != problem.m()) {
      fail("state or input dimension differs from the problem");
    }
  }
}

}  // namespace krotov
