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

#include <stdexcept>
#include <string>
#include <string_view>

namespace krotov {

enum class ErrorCode {
  // model
  NonPdWeight,
  NonPsdWeight,
  DimensionMismatch,
  InvalidHorizon,
  InfiniteHorizonWithTerminalCost,
  TimeVaryingInfiniteHorizon,
  ProfileSingularity,
  ParseError,
  // krotov_core
  OutOfHorizon,
  InfiniteHorizon,
  GridMismatch,
  // solvers
  NotSpd,
  IntegrationBlowup,
  NoSolutionFound,
  NoStabilizingSolution,
  NotStabilizable,
  // tracking
  NotHurwitz,
  UnstableExponent,
  // iterative
  DivergedIterate,
  Unstabilizable,
  // sim
  Blowup,
  GridTooCoarse,
  // plumbing
  InvalidArgument,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPdWeight: return "NonPdWeight";
    case ErrorCode::NonPsdWeight: return "NonPsdWeight";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidHorizon: return "InvalidHorizon";
    case ErrorCode::InfiniteHorizonWithTerminalCost: return "InfiniteHorizonWithTerminalCost";
    case ErrorCode::TimeVaryingInfiniteHorizon: return "TimeVaryingInfiniteHorizon";
    case ErrorCode::ProfileSingularity: return "ProfileSingularity";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::InfiniteHorizon: return "InfiniteHorizon";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotSpd: return "NotSpd";
    case ErrorCode::IntegrationBlowup: return "IntegrationBlowup";
    case ErrorCode::NoSolutionFound: return "NoSolutionFound";
    case ErrorCode::NoStabilizingSolution: return "NoStabilizingSolution";
    case ErrorCode::NotStabilizable: return "NotStabilizable";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::UnstableExponent: return "UnstableExponent";
    case ErrorCode::DivergedIterate: return "DivergedIterate";
    case ErrorCode::Unstabilizable: return "Unstabilizable";
    case ErrorCode::Blowup: return "Blowup";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code. The message names the
/// operation that failed, e.g. "solvers::solve_algebraic: no start converged".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace krotov
