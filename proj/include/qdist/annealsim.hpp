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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdist/qubo.hpp"

namespace qdist {

inline constexpr std::size_t kMaxSimSpins = 14;
inline constexpr std::size_t kMaxGroundSpaceSpins = 24;
inline constexpr std::size_t kMaxDenseSpins = 12;

/// Piecewise-linear A(gamma), B(gamma) through sample points.
struct AnnealSchedule {
  std::vector<double> gamma;
  std::vector<double> a;
  std::vector<double> b;

  /// A = 1 - gamma, B = gamma.
  static AnnealSchedule linear();

  double a_at(double g) const;
  double b_at(double g) const;
  /// Slopes of the segment containing g (the left segment at g = 1).
  double a_slope(double g) const;
  double b_slope(double g) const;

  /// Throws InputError unless gamma is strictly increasing from 0 to 1,
  /// A(0) > B(0) and A(1) < B(1).
  void validate() const;
};

/// Header "gamma A B" then rows of three numbers; '#' starts a comment.
AnnealSchedule parse_schedule(std::string_view text);
AnnealSchedule load_schedule(const std::string &path);

/// Problem part of the Hamiltonian on the computational basis:
/// D(s) = sum_i h_i sigma_i + sum_{i<j} J_ij sigma_i sigma_j, where bit i of
/// the basis index s is x_i and sigma_i = 2 x_i - 1. The offset is left out.
std::vector<double> problem_diagonal(const IsingProblem &ising);

/// out = H psi with H = -a/2 sum_i X_i + b/2 diag.
void apply_hamiltonian(std::span<const double> diag, std::size_t num_spins, double a, double b,
                       std::span<const std::complex<double>> psi, std::span<std::complex<double>> out);

struct GroundSpace {
  double energy = 0.0;  // classical energy including the offset
  std::vector<std::uint64_t> states;
};

/// Every basis state of minimal classical energy, in increasing order.
GroundSpace ground_space(const IsingProblem &ising);

struct SimParams {
  double anneal_time = 1.0;
  std::size_t steps = 0;  // 0: automatic
  double renorm_tolerance = 1e-9;
  std::size_t trace_points = 0;  // <H> samples after gamma = 0, evenly spaced in steps
};

struct EnergySample {
  double gamma = 0.0;
  double energy = 0.0;
};

struct SimResult {
  double success_probability = 0.0;
  double final_norm = 1.0;
  std::size_t ground_space_dimension = 0;
  std::size_t steps = 0;
  std::size_t renormalizations = 0;
  double max_drift = 0.0;
  std::vector<EnergySample> energy_trace;
};

/// Steps used when SimParams::steps is 0: max(2000, 200 t_a), raised so
/// that dt times the norm bound of H stays below 0.1.
std::size_t default_steps(const IsingProblem &ising, const AnnealSchedule &schedule, double anneal_time);

/// RK4 integration of i dpsi/dt = H(t / t_a) psi from the uniform
/// superposition. Renormalizes whenever |norm - 1| exceeds the tolerance;
/// throws InputError if a single step changes the norm by more than 1e-6.
SimResult evolve(const IsingProblem &ising, const AnnealSchedule &schedule, const SimParams &params);

struct GapPoint {
  double gamma = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
  double ed = 0.0;  // level D, D = final ground-space dimension
};

struct GapScan {
  double naive_gap = 0.0;  // min E1 - E0
  double naive_gamma = 0.0;
  double gap = 0.0;  // min ED - E0
  double gamma_star = 0.0;
  std::size_t degeneracy = 0;
  std::vector<GapPoint> curve;
};

/// Dense eigensolves on the grid 0, step, ..., 1.
GapScan gap_scan(const IsingProblem &ising, const AnnealSchedule &schedule, double grid_step);

struct AdiabaticEstimate {
  double matrix_element = 0.0;  // max |<D, g| dH/dg |0, g>|
  double gap = 0.0;
  double gamma_star = 0.0;
  double time = 0.0;  // matrix_element / gap^2
};

/// Throws InputError when the problem Hamiltonian has no excited level.
AdiabaticEstimate adiabatic_time_estimate(const IsingProblem &ising, const AnnealSchedule &schedule,
                                          double grid_step = 0.01);

}  // namespace qdist
