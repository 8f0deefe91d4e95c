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

#include "qdist/distance.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "qdist/errors.hpp"

namespace qdist {

DistanceReport min_distance_bruteforce(const StabilizerCode &code) {
  const std::size_t n = code.n();
  const std::size_t dim = code.n() + code.k();
  if (dim > kMaxBruteForceDimension) {
    throw SizeGuardError("brute-force distance needs 2^" + std::to_string(dim) +
                         " codewords; n + k is limited to " + std::to_string(kMaxBruteForceDimension) +
                         ". Use the QUBO pipeline (qubo/solve) to bound larger codes.");
  }
  // Each column of G as (alpha mask, beta mask); n <= 26 fits one word.
  const BitMatrix &g = code.normalizer();
  std::vector<std::uint64_t> col_x(dim, 0), col_z(dim, 0);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t q = 0; q < n; ++q) {
      if (g.get(q, c)) {
        col_x[c] |= std::uint64_t{1} << q;
      }
      if (g.get(n + q, c)) {
        col_z[c] |= std::uint64_t{1} << q;
      }
    }
  }
  const std::uint64_t logical_mask = code.k() > 0 ? (std::uint64_t{1} << (2 * code.k())) - 1 : 0;

  DistanceReport report;
  report.d = std::numeric_limits<std::size_t>::max();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> best;
  std::uint64_t x = 0, alpha = 0, beta = 0;
  const std::uint64_t total = std::uint64_t{1} << dim;
  for (std::uint64_t step = 1; step < total; ++step) {
    std::size_t bit = static_cast<std::size_t>(std::countr_zero(step));
    x ^= std::uint64_t{1} << bit;
    alpha ^= col_x[bit];
    beta ^= col_z[bit];
    if (code.k() > 0 && (x & logical_mask) == 0) {
      continue;
    }
    std::size_t w = static_cast<std::size_t>(std::popcount(alpha | beta));
    if (w < report.d) {
      report.d = w;
      best.clear();
    }
    if (w == report.d) {
      best.emplace_back(alpha, beta);
    }
  }
  report.enumerated = total;
  if (best.empty()) {
    throw InvariantError("code has no nontrivial elements to minimize over");
  }
  for (const auto &[a, b] : best) {
    BitVector c(2 * n, 0);
    for (std::size_t q = 0; q < n; ++q) {
      c[q] = (a >> q) & 1;
      c[n + q] = (b >> q) & 1;
    }
    report.minimizers.push_back(std::move(c));
  }
  std::sort(report.minimizers.begin(), report.minimizers.end());
  return report;
}

std::size_t degeneracy_count(const StabilizerCode &code) { return min_distance_bruteforce(code).minimizers.size(); }

CirculantCode best_circulant(std::size_t n) {
  std::vector<CirculantCode> candidates = symmetric_circulants(n, false);
  if (candidates.empty()) {
    throw InputError("no circulant codes of length 0");
  }
  std::size_t best = 0, best_d = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    StabilizerCode code = graph_stabilizer_code(circulant_to_graph(candidates[i]));
    std::size_t d = min_distance_bruteforce(code).d;
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return candidates[best];
}

}  // namespace qdist
