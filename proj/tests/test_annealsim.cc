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

#include <cmath>
#include <complex>

#include "doctest.h"
#include "qdist/annealsim.hpp"
#include "qdist/errors.hpp"
#include "support/oracles.hpp"

using namespace qdist;
using namespace qdist::testing;

namespace {

IsingProblem single_spin(double h) {
  IsingProblem p;
  p.num_spins = 1;
  p.h = {h};
  return p;
}

IsingProblem random_ising(Rng &rng, std::size_t n) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  IsingProblem p;
  p.num_spins = n;
  for (std::size_t i = 0; i < n; ++i) {
    p.h.push_back(coeff(rng));
    for (std::size_t k = i + 1; k < n; ++k) {
      if (rng() % 2) {
        p.j[{i, k}] = coeff(rng);
      }
    }
  }
  p.offset = coeff(rng);
  return p;
}

/// Single-spin success probability from exact 2x2 propagators on a fine
/// midpoint grid; basis order (sigma = -1, sigma = +1).
double two_level_success(double h, double anneal_time, std::size_t steps) {
  using C = std::complex<double>;
  C psi0 = 1.0 / std::sqrt(2.0);
  C psi1 = psi0;
  const double dt = anneal_time / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    double g = (static_cast<double>(s) + 0.5) / static_cast<double>(steps);
    double bx = -(1.0 - g) / 2.0;
    double bz = -g * h / 2.0;  // coefficient of diag(+1, -1)
    double r = std::hypot(bx, bz);
    C c = std::cos(r * dt);
    C is = C(0.0, -std::sin(r * dt) / r);
    C n0 = (c + is * bz) * psi0 + is * bx * psi1;
    C n1 = is * bx * psi0 + (c - is * bz) * psi1;
    psi0 = n0;
    psi1 = n1;
  }
  return h > 0 ? std::norm(psi0) : std::norm(psi1);
}

}  // namespace

TEST_CASE("problem diagonal equals the classical energies") {
  Rng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    QuboProblem q = random_qubo(rng, 1 + rng() % 8);
    IsingProblem ising = to_ising(q);
    std::vector<double> diag = problem_diagonal(ising);
    REQUIRE(diag.size() == (std::size_t{1} << q.num_vars()));
    for (std::size_t s = 0; s < diag.size(); ++s) {
      BitVector x = bits_of(s, q.num_vars());
      CHECK(diag[s] + ising.offset == doctest::Approx(static_cast<double>(q.energy(x))));
    }
  }
}

TEST_CASE("single qubit spectrum") {
  AnnealSchedule linear = AnnealSchedule::linear();
  GapScan scan = gap_scan(single_spin(1.0), linear, 0.01);
  REQUIRE(scan.curve.size() == 101);
  CHECK(scan.curve.front().e0 == doctest::Approx(-0.5));
  CHECK(scan.curve.front().e1 == doctest::Approx(0.5));
  CHECK(scan.curve[50].e1 - scan.curve[50].e0 == doctest::Approx(std::sqrt(0.5)));
  CHECK(scan.naive_gap == doctest::Approx(std::sqrt(0.5)));
  CHECK(scan.naive_gamma == doctest::Approx(0.5));
  CHECK(scan.degeneracy == 1);
  CHECK(scan.gap == doctest::Approx(scan.naive_gap));
}

TEST_CASE("adiabatic estimate matches the two-level closed form") {
  // gap(g) = sqrt((1-g)^2 + g^2 h^2), minimum h / sqrt(1 + h^2) at 1 / (1 + h^2);
  // the coupling is h / (2 gap(g)).
  for (double h : {1.0, 2.0, 3.0}) {
    AdiabaticEstimate est = adiabatic_time_estimate(single_spin(h), AnnealSchedule::linear(), 0.01);
    double gap = h / std::sqrt(1.0 + h * h);
    CHECK(est.gap == doctest::Approx(gap).epsilon(1e-3));
    CHECK(est.gamma_star == doctest::Approx(1.0 / (1.0 + h * h)).epsilon(0.02));
    CHECK(est.matrix_element == doctest::Approx(h / (2.0 * gap)).epsilon(1e-3));
    CHECK(est.time == doctest::Approx(est.matrix_element / (est.gap * est.gap)));
    CHECK(std::isfinite(est.time));
  }
  IsingProblem flat;
  flat.num_spins = 2;
  flat.h = {0.0, 0.0};
  CHECK_THROWS_AS(adiabatic_time_estimate(flat, AnnealSchedule::linear()), InputError);
}

TEST_CASE("decoupled copies share the minimum gap") {
  IsingProblem one = single_spin(1.0);
  IsingProblem two = single_spin(1.0);
  two.num_spins = 2;
  two.h = {1.0, 1.0};
  AnnealSchedule linear = AnnealSchedule::linear();
  CHECK(gap_scan(two, linear, 0.01).naive_gap == doctest::Approx(gap_scan(one, linear, 0.01).naive_gap));
}

TEST_CASE("degenerate ground space sets the gap level") {
  IsingProblem p;
  p.num_spins = 3;
  p.h = {0.0, 0.0, 1.0};
  GapScan scan = gap_scan(p, AnnealSchedule::linear(), 0.05);
  CHECK(scan.degeneracy == 4);
  CHECK(scan.gap > 0.0);
  CHECK(scan.naive_gap <= scan.gap);
}

TEST_CASE("ground space") {
  IsingProblem zero;
  zero.num_spins = 3;
  zero.h = {0.0, 0.0, 0.0};
  zero.offset = 2.0;
  GroundSpace all = ground_space(zero);
  CHECK(all.states.size() == 8);
  CHECK(all.energy == 2.0);

  GroundSpace one = ground_space(single_spin(1.0));
  CHECK(one.states == std::vector<std::uint64_t>{0});
  CHECK(one.energy == -1.0);

  Rng rng(82);
  for (int trial = 0; trial < 10; ++trial) {
    QuboProblem q = random_qubo(rng, 2 + rng() % 8, 0.5, 3);
    NaiveMin oracle = naive_minimum(q);
    GroundSpace g = ground_space(to_ising(q));
    CHECK(g.energy == doctest::Approx(static_cast<double>(oracle.energy)));
    CHECK(g.states.size() == oracle.argmins.size());
  }
}

TEST_CASE("sudden limit gives the uniform overlap") {
  Rng rng(83);
  for (int trial = 0; trial < 5; ++trial) {
    IsingProblem p = random_ising(rng, 2 + trial % 4);
    SimParams params;
    params.anneal_time = 1e-4;
    SimResult r = evolve(p, AnnealSchedule::linear(), params);
    double expected = static_cast<double>(r.ground_space_dimension) /
                      static_cast<double>(std::size_t{1} << p.num_spins);
    CHECK(r.success_probability == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("slow anneal of a single spin") {
  SimParams params;
  params.anneal_time = 50.0;
  SimResult r = evolve(single_spin(-1.0), AnnealSchedule::linear(), params);
  CHECK(r.success_probability >= 0.99);
  params.steps = 2 * r.steps;
  SimResult fine = evolve(single_spin(-1.0), AnnealSchedule::linear(), params);
  CHECK(fine.success_probability == doctest::Approx(r.success_probability).epsilon(1e-6));
}

TEST_CASE("evolution matches exact two-level propagation") {
  for (double h : {1.0, -1.0, 0.5}) {
    for (double ta : {0.5, 2.0, 8.0}) {
      SimParams params;
      params.anneal_time = ta;
      SimResult r = evolve(single_spin(h), AnnealSchedule::linear(), params);
      CHECK(r.success_probability == doctest::Approx(two_level_success(h, ta, 200000)).epsilon(1e-5));
    }
  }
}

TEST_CASE("norm is preserved") {
  Rng rng(84);
  IsingProblem p = random_ising(rng, 6);
  SimParams params;
  params.anneal_time = 10.0;
  params.trace_points = 5;
  SimResult r = evolve(p, AnnealSchedule::linear(), params);
  CHECK(std::abs(r.final_norm - 1.0) <= 1e-6);
  CHECK(r.max_drift <= 1e-6);
  REQUIRE(r.energy_trace.size() == 6);
  CHECK(r.energy_trace.front().gamma == 0.0);
  CHECK(r.energy_trace.back().gamma == doctest::Approx(1.0));
  CHECK(r.steps == default_steps(p, AnnealSchedule::linear(), 10.0));
  CHECK(r.steps >= 2000);
  params.renorm_tolerance = 1e-3;
  CHECK_THROWS_AS(evolve(p, AnnealSchedule::linear(), params), InputError);
}

TEST_CASE("success probability grows with anneal time") {
  Rng rng(85);
  IsingProblem p = random_ising(rng, 3);
  double previous = 0.0;
  for (double ta : {0.01, 1.0, 20.0}) {
    SimParams params;
    params.anneal_time = ta;
    double ps = evolve(p, AnnealSchedule::linear(), params).success_probability;
    CHECK(ps >= previous - 1e-9);
    previous = ps;
  }
}

TEST_CASE("size guards") {
  IsingProblem big;
  big.num_spins = kMaxSimSpins + 1;
  big.h.assign(big.num_spins, 1.0);
  CHECK_THROWS_AS(evolve(big, AnnealSchedule::linear(), SimParams{}), SizeGuardError);
  CHECK_THROWS_AS(gap_scan(big, AnnealSchedule::linear(), 0.1), SizeGuardError);
}

TEST_CASE("schedule parsing") {
  AnnealSchedule s = parse_schedule("# custom\ngamma A B\n0 1 0\n0.5 0.4 0.6  # mid\n\n1 0 1\n");
  CHECK(s.gamma == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(s.a_at(0.25) == doctest::Approx(0.7));
  CHECK(s.b_at(0.75) == doctest::Approx(0.8));
  CHECK(s.a_slope(0.25) == doctest::Approx(-1.2));
  CHECK(s.b_slope(1.0) == doctest::Approx(0.8));
  CHECK_NOTHROW(s.validate());

  auto line_of = [](const std::string &text) {
    try {
      parse_schedule(text);
    } catch (const ParseError &e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("0 1 0\n") == 1);
  CHECK(line_of("gamma A B\n0 1 0\n0.5 x 1\n") == 3);
  CHECK(line_of("gamma A B\n0 1\n") == 2);

  AnnealSchedule bad;
  bad.gamma = {0.0, 0.7, 0.5, 1.0};
  bad.a = {1, 0.5, 0.4, 0};
  bad.b = {0, 0.5, 0.6, 1};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad.gamma = {0.0, 1.0};
  bad.a = {0.0, 0.0};
  bad.b = {1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), InputError);
}
