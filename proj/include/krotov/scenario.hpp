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
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "krotov/error.hpp"
#include "krotov/model.hpp"

// Scenario files are line-oriented `key = value` text:
//
//   kind = tracking
//   A = 0,1; 1,1          # rows separated by ';', entries by ','
//   A_profile = recip_shift:-1:1
//   tf = inf
//   reference = sin:0,1:0.0314159
//
// '#' starts a comment. Unknown or repeated keys are errors.

namespace krotov {

namespace scenario_detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "parse_scenario: line " + std::to_string(line) + ": " + msg);
}

inline double parse_real(std::string_view s, int line) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) fail(line, "not a number: '" + std::string(s) + "'");
  return value;
}

inline Eigen::MatrixXd parse_matrix(std::string_view s, int line) {
  const auto rows = split(s, ';');
  std::vector<std::vector<double>> entries;
  for (const auto row : rows) {
    if (row.empty()) fail(line, "empty matrix row");
    std::vector<double> values;
    for (const auto cell : split(row, ',')) values.push_back(parse_real(cell, line));
    if (!entries.empty() && values.size() != entries.front().size()) fail(line, "ragged matrix rows");
    entries.push_back(std::move(values));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = entries[i][j];
  }
  return m;
}

/// Accepts "1,2,3" or a single column "1;2;3".
inline Eigen::VectorXd parse_vector(std::string_view s, int line) {
  const Eigen::MatrixXd m = parse_matrix(s, line);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  fail(line, "expected a vector");
}

inline ReferenceSignal parse_reference(std::string_view s, int line) {
  const auto parts = split(s, ':');
  const auto kind = parts.front();
  if (kind == "zero" && parts.size() == 1) return ReferenceSignal::zero(0);
  if (kind == "ramp" && parts.size() == 2) return ReferenceSignal::ramp(parse_vector(parts[1], line));
  if (kind == "const" && parts.size() == 2) return ReferenceSignal::constant(parse_vector(parts[1], line));
  if (kind == "sin" && parts.size() == 3) {
    return ReferenceSignal::sinusoid(parse_vector(parts[1], line), parse_real(parts[2], line));
  }
  fail(line, "bad reference '" + std::string(s) + "' (zero | ramp:<slope> | const:<value> | sin:<alpha>:<omega>)");
}

inline std::optional<ReciprocalShift> parse_profile(std::string_view s, int line) {
  const auto parts = split(s, ':');
  if (parts.front() == "const" && parts.size() == 1) return std::nullopt;
  if (parts.front() == "recip_shift" && parts.size() == 3) {
    return ReciprocalShift{parse_real(parts[1], line), parse_real(parts[2], line)};
  }
  fail(line, "bad profile '" + std::string(s) + "' (const | recip_shift:<scale>:<shift>)");
}

}  // namespace scenario_detail

/// Parses and validates a scenario. Unspecified optional keys default to:
/// kind = regulation, C = I, F = 0, t0 = 0, reference = zero, cost_scale = 0.5.
inline LqProblem parse_scenario(std::istream& in) {
  using namespace scenario_detail;
  static const std::set<std::string, std::less<>> kKeys = {
      "kind", "A", "B", "C", "Q", "R", "F", "t0", "tf", "x0", "reference", "A_profile", "cost_scale"};
  std::map<std::string, std::pair<std::string, int>, std::less<>> values;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!kKeys.contains(key)) fail(line_no, "unknown key '" + std::string(key) + "'");
    if (values.contains(key)) fail(line_no, "duplicate key '" + std::string(key) + "'");
    if (value.empty()) fail(line_no, "empty value for '" + std::string(key) + "'");
    values.emplace(std::string(key), std::pair{std::string(value), line_no});
  }
  const auto require = [&](const char* key) -> const std::pair<std::string, int>& {
    const auto it = values.find(key);
    if (it == values.end()) fail(line_no, std::string("missing required key '") + key + "'");
    return it->second;
  };
  const auto optional = [&](const char* key) -> const std::pair<std::string, int>* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  LqProblem p;
  if (const auto* kind = optional("kind")) {
    if (kind->first == "regulation") {
      p.kind = ProblemKind::Regulation;
    } else if (kind->first == "tracking") {
      p.kind = ProblemKind::Tracking;
    } else {
      fail(kind->second, "kind must be 'regulation' or 'tracking'");
    }
  }
  const auto& a = require("A");
  Eigen::MatrixXd a_coeff = parse_matrix(a.first, a.second);
  std::optional<ReciprocalShift> profile;
  if (const auto* prof = optional("A_profile")) profile = parse_profile(prof->first, prof->second);
  p.A = profile ? TimeMatrix::scaled(std::move(a_coeff), *profile) : TimeMatrix::constant(std::move(a_coeff));
  const auto& b = require("B");
  p.B = TimeMatrix::constant(parse_matrix(b.first, b.second));
  const Eigen::Index n = p.A.rows();
  if (const auto* c = optional("C")) {
    p.C = TimeMatrix::constant(parse_matrix(c->first, c->second));
  } else {
    p.C = TimeMatrix::constant(Eigen::MatrixXd::Identity(n, n));
  }
  const auto& q = require("Q");
  p.Q = parse_matrix(q.first, q.second);
  const auto& r = require("R");
  p.R = parse_matrix(r.first, r.second);
  if (const auto* f = optional("F")) {
    p.F = parse_matrix(f->first, f->second);
  } else {
    p.F = Eigen::MatrixXd::Zero(p.Q.rows(), p.Q.cols());
  }
  double t0 = 0.0;
  if (const auto* t = optional("t0")) t0 = parse_real(t->first, t->second);
  const auto& tf_entry = require("tf");
  const double tf = parse_real(tf_entry.first, tf_entry.second);
  p.horizon = std::isinf(tf) && tf > 0 ? Horizon::infinite(t0) : Horizon::finite(t0, tf);
  const auto& x0 = require("x0");
  p.x0 = parse_vector(x0.first, x0.second);
  if (const auto* z = optional("reference")) {
    p.reference = parse_reference(z->first, z->second);
    if (p.reference.kind() == ReferenceSignal::Kind::Zero) p.reference = ReferenceSignal::zero(p.C.rows());
  } else {
    p.reference = ReferenceSignal::zero(p.C.rows());
  }
  if (const auto* s = optional("cost_scale")) p.cost_scale = parse_real(s->first, s->second);
  return validate_problem(p);
}

inline LqProblem parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline LqProblem load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "load_scenario: cannot open '" + path + "'");
  return parse_scenario(in);
}

}  // namespace krotov
