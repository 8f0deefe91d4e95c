// Copyright 2026 The qdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qdist/codes.hpp"

namespace qdist {

struct DistanceReport {
  std::size_t d = 0;
  /// Minimum-weight codewords (2n-bit vectors), sorted lexicographically.
  std::vector<BitVector> minimizers;
  /// Number of x vectors visited, including skipped ones.
  std::uint64_t enumerated = 0;
};

inline constexpr std::size_t kMaxBruteForceDimension = 26;

/// Exact distance by enumerating every x in F_2^{n+k} in Gray-code order.
/// For k = 0 the zero vector is skipped; for k >= 1 every x with a zero
/// logical block (G x in the stabilizer) is skipped.
/// Throws SizeGuardError when n + k exceeds kMaxBruteForceDimension.
DistanceReport min_distance_bruteforce(const StabilizerCode &code);

/// Number of minimum-weight nontrivial elements.
std::size_t degeneracy_count(const StabilizerCode &code);

/// Symmetric circulant code of length n without self-loops with the largest
/// brute-force distance; the first in symmetric_circulants order on ties.
CirculantCode best_circulant(std::size_t n);

}  // namespace qdist
