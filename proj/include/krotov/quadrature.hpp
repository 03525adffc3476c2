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

#include <cstddef>
#include <vector>

#include "krotov/error.hpp"

namespace krotov {

/// Composite Simpson rule on an arbitrary increasing grid. Interval pairs use
/// the non-uniform Simpson weights; a leftover last interval uses the
/// three-point rule through the final nodes. Needs at least three nodes.
inline double simpson(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t count = t.size();
  if (count != f.size()) throw Error(ErrorCode::GridMismatch, "simpson: size mismatch");
  if (count < 3) throw Error(ErrorCode::GridTooCoarse, "simpson: fewer than 3 nodes");
  double sum = 0.0;
  std::size_t i = 0;
  for (; i + 2 < count; i += 2) {
    const double h0 = t[i + 1] - t[i];
    const double h1 = t[i + 2] - t[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < count) {
    const std::size_t k = count - 1;
    const double h0 = t[k - 1] - t[k - 2];
    const double h1 = t[k] - t[k - 1];
    sum += f[k] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) +
           f[k - 1] * (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0) -
           f[k - 2] * (h1 * h1 * h1) / (6.0 * h0 * (h0 + h1));
  }
  return sum;
}

}  // namespace krotov
