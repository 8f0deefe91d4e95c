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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdist/qubo.hpp"

namespace qdist {

struct TraceEntry {
  std::size_t round = 0;
  std::int64_t energy = 0;
  bool accepted = false;
  bool operator==(const TraceEntry &) const = default;
};

struct SolveResult {
  std::string solver;
  BitVector best_assignment;
  std::int64_t best_energy = 0;
  /// best_energy read under the builders' offset convention (minimum = d).
  std::int64_t distance_bound = 0;
  std::uint64_t evaluations = 0;
  std::size_t restarts_used = 0;
  std::uint64_t seed = 0;
  std::chrono::nanoseconds wall_time{0};
  /// Best energy of each restart (SA) in restart order.
  std::vector<std::int64_t> restart_energies;
  /// Incumbent trace (decomposition solver).
  std::vector<TraceEntry> trace;
  /// Fully resolved parameters, defaults included.
  nlohmann::json params = nlohmann::json::object();
};

/// Largest number of variables the exact solver enumerates jointly.
inline constexpr std::size_t kMaxExactWidth = 30;

/// Global minimum by exhaustive Gray-code enumeration with incremental
/// energy updates.
///
/// When fixing a subset S of the variables splits the rest into small
/// independent components, only S is enumerated and each component is
/// minimized exhaustively for every assignment of S. With S equal to all
/// variables this is plain enumeration. Throws SizeGuardError when the
/// enumerated set would exceed kMaxExactWidth or the estimated work exceeds
/// about 2^36 updates. Ties keep the first optimum in enumeration order.
SolveResult solve_exact(const QuboProblem &q);

/// Number of variables solve_exact would enumerate jointly.
std::size_t exact_search_width(const QuboProblem &q);

struct SaParams {
  std::size_t sweeps = 0;  // 0: enough sweeps to cool from T0 to final_temperature
  std::size_t restarts = 1;
  std::optional<double> initial_temperature;  // empty: tuned from random flips
  double cooling = 0.97;
  double final_temperature = 1e-2;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Best-of-restarts single-flip Metropolis annealing with geometric cooling.
/// Restart i uses derive_seed(seed, i), so results do not depend on
/// `threads`.
SolveResult solve_sa(const QuboProblem &q, const SaParams &params);

enum class InnerSolver : std::uint8_t { exact, sa };

struct DecomposeParams {
  std::size_t subproblem_size = 20;
  InnerSolver inner = InnerSolver::exact;
  std::size_t exact_threshold = 20;
  std::size_t rounds = 200;
  std::size_t patience = 20;
  std::size_t tabu_tenure = 3;
  double random_fraction = 0.25;
  SaParams inner_sa = [] {
    SaParams p;
    p.restarts = 4;
    return p;
  }();
  std::optional<std::chrono::milliseconds> time_budget;
  std::uint64_t seed = 0;
};

/// Clamp-and-solve decomposition. Each round picks a subset (largest
/// single-flip gain first plus a random share, skipping tabu variables),
/// clamps the rest to the incumbent, solves the subproblem and accepts it
/// only on strict improvement. Problems no larger than the subproblem size
/// or the exact threshold are solved in one piece.
SolveResult solve_decomposed(const QuboProblem &q, const DecomposeParams &params);

/// found / exact. Throws InputError when exact <= 0.
double approximation_ratio(std::int64_t found, std::int64_t exact);

/// Fraction of trials whose best energy equals `exact`. Throws InputError on
/// an empty list.
double success_rate(std::span<const SolveResult> trials, std::int64_t exact);

/// splitmix64-based seed for stream `index` of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Re-evaluates the assignment and throws InvariantError on mismatch.
void verify_result(const QuboProblem &q, const SolveResult &result);

}  // namespace qdist
