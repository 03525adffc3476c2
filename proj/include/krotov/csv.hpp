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

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/iterative.hpp"
#include "krotov/krotov_core.hpp"
#include "krotov/model.hpp"
#include "krotov/solvers.hpp"
#include "krotov/trajectory.hpp"

namespace krotov {

/// Shortest round-trip decimal form; locale-independent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace csv_detail {

inline void row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(values[i]);
  }
  out << '\n';
}

inline std::string indexed(const char* stem, Eigen::Index count) {
  std::string s;
  for (Eigen::Index i = 1; i <= count; ++i) s += std::string(",") + stem + "_" + std::to_string(i);
  return s;
}

/// Node indices written at stride `every`; the last node is always kept.
inline std::vector<std::size_t> strided(std::size_t count, std::size_t every) {
  std::vector<std::size_t> idx;
  if (every == 0) every = 1;
  for (std::size_t i = 0; i < count; i += every) idx.push_back(i);
  if (count > 0 && idx.back() != count - 1) idx.push_back(count - 1);
  return idx;
}

}  // namespace csv_detail

/// Stride that keeps a `count`-node series at or below `max_rows` rows.
inline std::size_t default_stride(std::size_t count, std::size_t max_rows = 10000) {
  return count <= max_rows ? 1 : (count + max_rows - 1) / max_rows;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t every = 1) {
  if (traj.grid.empty()) throw Error(ErrorCode::InvalidArgument, "write_trajectory_csv: empty trajectory");
  out << 't' << csv_detail::indexed("x", traj.states[0].size()) << csv_detail::indexed("u", traj.inputs[0].size())
      << ",running_cost\n";
  for (const std::size_t i : csv_detail::strided(traj.grid.size(), every)) {
    std::vector<double> v{traj.grid[i]};
    v.insert(v.end(), traj.states[i].data(), traj.states[i].data() + traj.states[i].size());
    v.insert(v.end(), traj.inputs[i].data(), traj.inputs[i].data() + traj.inputs[i].size());
    v.push_back(traj.running_cost[i]);
    csv_detail::row(out, v);
  }
  out << "# total_cost=" << format_double(traj.total_cost) << " tail_bound=" << format_double(traj.tail_bound)
      << '\n';
}

/// One row per solution: P entries in row-major order, then the classification.
inline void write_solutions_csv(std::ostream& out, const SolutionSet& set) {
  if (set.solutions.empty()) {
    out << "residual_norm,symmetric,spd_symmetric_part,closed_loop_stable\n";
    return;
  }
  const Eigen::Index n = set.solutions.front().P.rows();
  std::string header;
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (Eigen::Index j = 1; j <= n; ++j) header += "p_" + std::to_string(i) + std::to_string(j) + ",";
  }
  out << header << "residual_norm,symmetric,spd_symmetric_part,closed_loop_stable\n";
  for (const auto& s : set.solutions) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) out << format_double(s.P(i, j)) << ',';
    }
    out << format_double(s.residual_norm) << ',' << int(s.symmetric) << ',' << int(s.spd_symmetric_part) << ','
        << int(s.closed_loop_stable) << '\n';
  }
}

inline void write_feedforward_csv(std::ostream& out, const VectorPath& g, const std::vector<double>& grid,
                                  std::size_t every = 1) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "write_feedforward_csv: empty grid");
  out << 't' << csv_detail::indexed("g", g(grid.front()).size()) << '\n';
  for (const std::size_t i : csv_detail::strided(grid.size(), every)) {
    const Eigen::VectorXd v = g(grid[i]);
    std::vector<double> r{grid[i]};
    r.insert(r.end(), v.data(), v.data() + v.size());
    csv_detail::row(out, r);
  }
}

/// `t,<stem>_11,<stem>_12,..` with matrix entries in row-major order.
inline void write_matrix_path_csv(std::ostream& out, const MatrixPath& path, const std::vector<double>& grid,
                                  const char* stem, std::size_t every = 1) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "write_matrix_path_csv: empty grid");
  const Eigen::MatrixXd first = path(grid.front());
  out << 't';
  for (Eigen::Index i = 1; i <= first.rows(); ++i) {
    for (Eigen::Index j = 1; j <= first.cols(); ++j) out << ',' << stem << '_' << i << j;
  }
  out << '\n';
  for (const std::size_t k : csv_detail::strided(grid.size(), every)) {
    const Eigen::MatrixXd v = path(grid[k]);
    std::vector<double> r{grid[k]};
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 0; j < v.cols(); ++j) r.push_back(v(i, j));
    }
    csv_detail::row(out, r);
  }
}

inline void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
  out << "k,J_k,delta,max_gain_change\n";
  for (const auto& r : records) {
    out << r.k << ',' << format_double(r.J_k) << ',' << format_double(r.delta) << ','
        << format_double(r.max_gain_change) << '\n';
  }
}

inline void write_certificate_csv(std::ostream& out, const ConvexityCertificate& cert, std::size_t every = 1) {
  out << "t,min_eig_sym_resid\n";
  for (const std::size_t i : csv_detail::strided(cert.samples.size(), every)) {
    csv_detail::row(out, {cert.samples[i].first, cert.samples[i].second});
  }
  out << "# terminal_min_eig=" << format_double(cert.terminal_min_eig) << " certified=" << int(cert.certified)
      << '\n';
}

/// Plotting columns: `t,y,z` (or `t,y_1..,z_1..`) for tracking runs and
/// `t,x_1..,u_1..` for regulation.
inline void emit_plot_data(const LqProblem& problem, const Trajectory& traj, const std::filesystem::path& out_path,
                           std::size_t every = 1) {
  if (traj.grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "emit_plot_data: trajectory has no extent");
  std::ofstream out(out_path);
  if (!out) throw Error(ErrorCode::IoError, "emit_plot_data: cannot open " + out_path.string());
  if (problem.is_tracking()) {
    const Eigen::Index p = problem.p();
    if (p == 1) {
      out << "t,y,z\n";
    } else {
      out << 't' << csv_detail::indexed("y", p) << csv_detail::indexed("z", p) << '\n';
    }
    for (const std::size_t i : csv_detail::strided(traj.grid.size(), every)) {
      const double t = traj.grid[i];
      const Eigen::VectorXd y = problem.C.eval(t) * traj.states[i];
      const Eigen::VectorXd z = problem.reference.eval(t);
      std::vector<double> r{t};
      r.insert(r.end(), y.data(), y.data() + y.size());
      r.insert(r.end(), z.data(), z.data() + z.size());
      csv_detail::row(out, r);
    }
  } else {
    out << 't' << csv_detail::indexed("x", problem.n()) << csv_detail::indexed("u", problem.m()) << '\n';
    for (const std::size_t i : csv_detail::strided(traj.grid.size(), every)) {
      std::vector<double> r{traj.grid[i]};
      r.insert(r.end(), traj.states[i].data(), traj.states[i].data() + traj.states[i].size());
      r.insert(r.end(), traj.inputs[i].data(), traj.inputs[i].data() + traj.inputs[i].size());
      csv_detail::row(out, r);
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "emit_plot_data: write failed for " + out_path.string());
}

}  // namespace krotov
