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
#include <span>
#include <vector>

#include "qdist/qubo.hpp"

namespace qdist::detail {

/// Adjacency-list view of a QuboProblem for the solvers' inner loops.
struct CompactQubo {
  std::size_t n = 0;
  std::int64_t offset = 0;
  std::vector<std::int64_t> linear;
  std::vector<std::size_t> start;  // neighbors of i: [start[i], start[i+1])
  std::vector<std::size_t> neighbor;
  std::vector<std::int64_t> weight;

  explicit CompactQubo(const QuboProblem &q) : n(q.num_vars()), offset(q.offset()), linear(q.linear()) {
    std::vector<std::size_t> degree(n, 0);
    for (const auto &[key, value] : q.quadratic()) {
      ++degree[key.first];
      ++degree[key.second];
    }
    start.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      start[i + 1] = start[i] + degree[i];
    }
    neighbor.resize(start[n]);
    weight.resize(start[n]);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto &[key, value] : q.quadratic()) {
      neighbor[fill[key.first]] = key.second;
      weight[fill[key.first]++] = value;
      neighbor[fill[key.second]] = key.first;
      weight[fill[key.second]++] = value;
    }
  }

  std::size_t degree(std::size_t i) const { return start[i + 1] - start[i]; }

  /// field[i] = linear[i] + sum_j Q_ij z_j; flipping i changes the energy
  /// by (1 - 2 z_i) field[i].
  std::vector<std::int64_t> fields(std::span<const std::uint8_t> z) const {
    std::vector<std::int64_t> f(linear);
    for (std::size_t i = 0; i < n; ++i) {
      if (!z[i]) {
        continue;
      }
      for (std::size_t p = start[i]; p < start[i + 1]; ++p) {
        f[neighbor[p]] += weight[p];
      }
    }
    return f;
  }

  std::int64_t energy(std::span<const std::uint8_t> z) const {
    std::int64_t e = offset;
    for (std::size_t i = 0; i < n; ++i) {
      if (!z[i]) {
        continue;
      }
      e += linear[i];
      for (std::size_t p = start[i]; p < start[i + 1]; ++p) {
        if (neighbor[p] > i && z[neighbor[p]]) {
          e += weight[p];
        }
      }
    }
    return e;
  }

  void flip(std::vector<std::uint8_t> &z, std::vector<std::int64_t> &f, std::size_t i) const {
    z[i] ^= 1;
    std::int64_t sign = z[i] ? 1 : -1;
    for (std::size_t p = start[i]; p < start[i + 1]; ++p) {
      f[neighbor[p]] += sign * weight[p];
    }
  }
};

}  // namespace qdist::detail
