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
#include <cmath>
#include <random>
#include <thread>

#include "compact_qubo.hpp"
#include "qdist/errors.hpp"
#include "qdist/solvers.hpp"

namespace qdist {

namespace {

using detail::CompactQubo;

constexpr std::size_t kTuningFlips = 100;
constexpr double kTuningAcceptance = 0.8;
constexpr std::size_t kMinAutoSweeps = 10;

double uniform01(std::mt19937_64 &rng) {
  // 53 random mantissa bits; identical across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

BitVector random_state(std::size_t n, std::mt19937_64 &rng) {
  BitVector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = static_cast<std::uint8_t>(rng() >> 63);
  }
  return z;
}

double tune_initial_temperature(const CompactQubo &c, std::uint64_t seed) {
  if (c.n == 0) {
    return 1.0;
  }
  std::mt19937_64 rng(derive_seed(seed, ~std::uint64_t{0}));
  BitVector z = random_state(c.n, rng);
  std::vector<std::int64_t> f = c.fields(z);
  double uphill = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < kTuningFlips; ++s) {
    std::size_t i = static_cast<std::size_t>(rng() % c.n);
    std::int64_t delta = z[i] ? -f[i] : f[i];
    if (delta > 0) {
      uphill += static_cast<double>(delta);
      ++count;
    }
  }
  if (count == 0) {
    return 1.0;
  }
  return -(uphill / static_cast<double>(count)) / std::log(kTuningAcceptance);
}

struct RestartOutcome {
  BitVector best;
  std::int64_t energy = 0;
  std::uint64_t evaluations = 0;
};

RestartOutcome anneal_once(const CompactQubo &c, std::uint64_t seed, double t0, double cooling, double t_final,
                           std::size_t sweeps) {
  std::mt19937_64 rng(seed);
  BitVector z = random_state(c.n, rng);
  std::vector<std::int64_t> f = c.fields(z);
  std::int64_t e = c.energy(z);
  RestartOutcome out{z, e, 0};
  double temperature = t0;
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < c.n; ++i) {
      std::int64_t delta = z[i] ? -f[i] : f[i];
      ++out.evaluations;
      if (delta <= 0 || uniform01(rng) < std::exp(-static_cast<double>(delta) / temperature)) {
        c.flip(z, f, i);
        e += delta;
        if (e < out.energy) {
          out.energy = e;
          out.best = z;
        }
      }
    }
    temperature = std::max(temperature * cooling, t_final);
  }
  // Zero-temperature descent from the final state.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < c.n; ++i) {
      std::int64_t delta = z[i] ? -f[i] : f[i];
      ++out.evaluations;
      if (delta < 0) {
        c.flip(z, f, i);
        e += delta;
        improved = true;
      }
    }
  }
  if (e < out.energy) {
    out.energy = e;
    out.best = z;
  }
  return out;
}

}  // namespace

SolveResult solve_sa(const QuboProblem &q, const SaParams &params) {
  if (!(params.cooling > 0.0 && params.cooling < 1.0)) {
    throw InputError("SA cooling factor must lie in (0, 1)");
  }
  if (params.restarts < 1) {
    throw InputError("SA needs at least one restart");
  }
  if (!(params.final_temperature > 0.0)) {
    throw InputError("SA final temperature must be positive");
  }
  const auto started = std::chrono::steady_clock::now();
  const CompactQubo c(q);
  const double t0 = params.initial_temperature.value_or(tune_initial_temperature(c, params.seed));
  if (!(t0 > 0.0)) {
    throw InputError("SA initial temperature must be positive");
  }
  std::size_t sweeps = params.sweeps;
  if (sweeps == 0) {
    sweeps = kMinAutoSweeps;
    if (t0 > params.final_temperature) {
      double needed = std::ceil(std::log(params.final_temperature / t0) / std::log(params.cooling)) + 1.0;
      sweeps = std::max(sweeps, static_cast<std::size_t>(needed));
    }
  }

  std::vector<RestartOutcome> outcomes(params.restarts);
  auto run_range = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t r = worker; r < params.restarts; r += workers) {
      outcomes[r] = anneal_once(c, derive_seed(params.seed, r), t0, params.cooling, params.final_temperature, sweeps);
    }
  };
  std::size_t workers = std::max<std::size_t>(1, std::min(params.threads, params.restarts));
  if (workers == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(run_range, w, workers);
    }
    for (auto &t : pool) {
      t.join();
    }
  }

  SolveResult result;
  result.solver = "sa";
  result.seed = params.seed;
  result.restarts_used = params.restarts;
  std::size_t best_index = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.restart_energies.push_back(outcomes[r].energy);
    result.evaluations += outcomes[r].evaluations;
    if (outcomes[r].energy < outcomes[best_index].energy) {
      best_index = r;
    }
  }
  result.best_assignment = outcomes[best_index].best;
  result.best_energy = outcomes[best_index].energy;
  result.distance_bound = result.best_energy;
  result.params = {{"sweeps", sweeps},
                   {"restarts", params.restarts},
                   {"initial_temperature", t0},
                   {"initial_temperature_auto", !params.initial_temperature.has_value()},
                   {"cooling", params.cooling},
                   {"final_temperature", params.final_temperature},
                   {"seed", params.seed}};
  result.wall_time = std::chrono::steady_clock::now() - started;
  verify_result(q, result);
  return result;
}

}  // namespace qdist
