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

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "compact_qubo.hpp"
#include "qdist/errors.hpp"
#include "qdist/solvers.hpp"

namespace qdist {

namespace {

using detail::CompactQubo;

/// Steepest single-flip descent from the all-zero state.
BitVector greedy_incumbent(const CompactQubo &c) {
  BitVector z(c.n, 0);
  std::vector<std::int64_t> f = c.fields(z);
  for (;;) {
    std::size_t pick = c.n;
    std::int64_t best_delta = 0;
    for (std::size_t i = 0; i < c.n; ++i) {
      std::int64_t delta = z[i] ? -f[i] : f[i];
      if (delta < best_delta) {
        best_delta = delta;
        pick = i;
      }
    }
    if (pick == c.n) {
      return z;
    }
    c.flip(z, f, pick);
  }
}

SolveResult solve_inner(const QuboProblem &sub, const DecomposeParams &params, std::uint64_t seed) {
  if (params.inner == InnerSolver::exact && sub.num_vars() <= params.exact_threshold) {
    return solve_exact(sub);
  }
  SaParams sa = params.inner_sa;
  sa.seed = seed;
  return solve_sa(sub, sa);
}

nlohmann::json describe(const DecomposeParams &p) {
  return {{"subproblem_size", p.subproblem_size},
          {"inner", p.inner == InnerSolver::exact ? "exact" : "sa"},
          {"exact_threshold", p.exact_threshold},
          {"rounds", p.rounds},
          {"patience", p.patience},
          {"tabu_tenure", p.tabu_tenure},
          {"random_fraction", p.random_fraction},
          {"inner_sa_restarts", p.inner_sa.restarts},
          {"time_budget_ms", p.time_budget ? nlohmann::json(p.time_budget->count()) : nlohmann::json()},
          {"seed", p.seed}};
}

}  // namespace

SolveResult solve_decomposed(const QuboProblem &q, const DecomposeParams &params) {
  if (params.subproblem_size < 2) {
    throw InputError("decomposition subproblem size must be at least 2");
  }
  if (params.exact_threshold > kMaxExactWidth) {
    throw InputError("exact threshold may not exceed " + std::to_string(kMaxExactWidth));
  }
  if (params.random_fraction < 0.0 || params.random_fraction > 1.0) {
    throw InputError("random fraction must lie in [0, 1]");
  }
  const auto started = std::chrono::steady_clock::now();
  const CompactQubo c(q);
  const std::size_t n = c.n;

  SolveResult result;
  result.solver = "decomposed";
  result.seed = params.seed;
  result.params = describe(params);

  if (n <= params.subproblem_size || n <= params.exact_threshold) {
    SolveResult whole = solve_inner(q, params, derive_seed(params.seed, 0));
    result.best_assignment = std::move(whole.best_assignment);
    result.best_energy = whole.best_energy;
    result.evaluations = whole.evaluations;
    result.restarts_used = 1;
    result.trace.push_back({0, result.best_energy, true});
  } else {
    std::mt19937_64 rng(derive_seed(params.seed, ~std::uint64_t{0}));
    BitVector z = greedy_incumbent(c);
    std::int64_t incumbent = c.energy(z);
    result.trace.push_back({0, incumbent, true});
    std::vector<std::size_t> tabu_until(n, 0);
    std::size_t stale = 0;
    std::size_t rounds_run = 0;
    const std::size_t size = std::min(params.subproblem_size, n);
    const auto n_random = static_cast<std::size_t>(params.random_fraction * static_cast<double>(size));

    for (std::size_t round = 1; round <= params.rounds; ++round) {
      if (params.time_budget && std::chrono::steady_clock::now() - started >= *params.time_budget) {
        break;
      }
      ++rounds_run;
      std::vector<std::int64_t> f = c.fields(z);
      std::vector<std::size_t> open, held;
      for (std::size_t i = 0; i < n; ++i) {
        (tabu_until[i] >= round ? held : open).push_back(i);
      }
      auto by_gain = [&](std::size_t a, std::size_t b) {
        std::int64_t da = z[a] ? -f[a] : f[a];
        std::int64_t db = z[b] ? -f[b] : f[b];
        return da != db ? da < db : a < b;
      };
      std::sort(open.begin(), open.end(), by_gain);
      std::sort(held.begin(), held.end(), by_gain);
      open.insert(open.end(), held.begin(), held.end());

      std::size_t n_top = size - std::min(n_random, size);
      std::vector<std::size_t> selected(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(n_top));
      std::vector<std::size_t> rest(open.begin() + static_cast<std::ptrdiff_t>(n_top), open.end());
      for (std::size_t pick = 0; pick < size - n_top && !rest.empty(); ++pick) {
        std::size_t j = pick + static_cast<std::size_t>(rng() % (rest.size() - pick));
        std::swap(rest[pick], rest[j]);
        selected.push_back(rest[pick]);
      }
      std::sort(selected.begin(), selected.end());

      std::vector<FixedVar> fixed;
      fixed.reserve(n - selected.size());
      for (std::size_t i = 0, s = 0; i < n; ++i) {
        if (s < selected.size() && selected[s] == i) {
          ++s;
        } else {
          fixed.push_back({i, z[i]});
        }
      }
      QuboProblem sub = clamp(q, fixed);
      SolveResult inner = solve_inner(sub, params, derive_seed(params.seed, round));
      result.evaluations += inner.evaluations;

      BitVector candidate = z;
      for (std::size_t s = 0; s < selected.size(); ++s) {
        candidate[selected[s]] = inner.best_assignment[s];
      }
      std::int64_t energy = c.energy(candidate);
      if (energy != inner.best_energy) {
        throw InvariantError("decomposition: subproblem energy disagrees with the full problem");
      }
      bool accepted = energy < incumbent;
      if (accepted) {
        for (std::size_t i = 0; i < n; ++i) {
          if (candidate[i] != z[i]) {
            tabu_until[i] = round + params.tabu_tenure;
          }
        }
        z = std::move(candidate);
        incumbent = energy;
        stale = 0;
      } else {
        ++stale;
      }
      result.trace.push_back({round, incumbent, accepted});
      if (stale >= params.patience) {
        break;
      }
    }
    result.best_assignment = std::move(z);
    result.best_energy = incumbent;
    result.restarts_used = rounds_run;
  }
  result.distance_bound = result.best_energy;
  result.wall_time = std::chrono::steady_clock::now() - started;
  verify_result(q, result);
  return result;
}

}  // namespace qdist
