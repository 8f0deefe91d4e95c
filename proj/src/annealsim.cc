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

#include "qdist/annealsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qdist/errors.hpp"

namespace qdist {

namespace {

using Complex = std::complex<double>;

std::size_t segment(const std::vector<double> &gamma, double g) {
  auto it = std::upper_bound(gamma.begin(), gamma.end(), g);
  std::size_t hi = static_cast<std::size_t>(it - gamma.begin());
  return std::clamp<std::size_t>(hi, 1, gamma.size() - 1) - 1;
}

double interpolate(const std::vector<double> &gamma, const std::vector<double> &values, double g) {
  std::size_t s = segment(gamma, g);
  double w = (g - gamma[s]) / (gamma[s + 1] - gamma[s]);
  return values[s] + w * (values[s + 1] - values[s]);
}

double slope(const std::vector<double> &gamma, const std::vector<double> &values, double g) {
  std::size_t s = segment(gamma, g);
  return (values[s + 1] - values[s]) / (gamma[s + 1] - gamma[s]);
}

void check_size(const IsingProblem &ising, std::size_t limit, const char *what) {
  if (ising.num_spins > limit) {
    throw SizeGuardError(std::string(what) + " handles at most " + std::to_string(limit) + " spins, got " +
                         std::to_string(ising.num_spins));
  }
}

std::vector<double> grid(double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw InputError("gamma grid step must lie in (0, 1]");
  }
  auto count = static_cast<std::size_t>(std::llround(1.0 / step));
  count = std::max<std::size_t>(count, 1);
  std::vector<double> out(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    out[i] = static_cast<double>(i) / static_cast<double>(count);
  }
  return out;
}

Eigen::MatrixXd dense_hamiltonian(std::span<const double> diag, std::size_t num_spins, double a, double b) {
  const std::size_t dim = diag.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    auto r = static_cast<Eigen::Index>(s);
    h(r, r) = 0.5 * b * diag[s];
    for (std::size_t i = 0; i < num_spins; ++i) {
      h(r, static_cast<Eigen::Index>(s ^ (std::size_t{1} << i))) = -0.5 * a;
    }
  }
  return h;
}

std::size_t degeneracy_of(std::span<const double> diag) {
  double lowest = *std::min_element(diag.begin(), diag.end());
  return static_cast<std::size_t>(
      std::count_if(diag.begin(), diag.end(), [&](double e) { return e <= lowest + 1e-9; }));
}

double norm_of(const std::vector<Complex> &psi) {
  double sum = 0.0;
  for (const Complex &c : psi) {
    sum += std::norm(c);
  }
  return std::sqrt(sum);
}

}  // namespace

AnnealSchedule AnnealSchedule::linear() { return {{0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}; }

double AnnealSchedule::a_at(double g) const { return interpolate(gamma, a, g); }
double AnnealSchedule::b_at(double g) const { return interpolate(gamma, b, g); }
double AnnealSchedule::a_slope(double g) const { return slope(gamma, a, g); }
double AnnealSchedule::b_slope(double g) const { return slope(gamma, b, g); }

void AnnealSchedule::validate() const {
  if (gamma.size() < 2 || a.size() != gamma.size() || b.size() != gamma.size()) {
    throw InputError("schedule needs at least two samples with gamma, A and B each");
  }
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!std::isfinite(gamma[i]) || !std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw InputError("schedule sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(gamma[i] > gamma[i - 1])) {
      throw InputError("schedule gamma values must be strictly increasing");
    }
  }
  if (gamma.front() != 0.0 || gamma.back() != 1.0) {
    throw InputError("schedule must start at gamma = 0 and end at gamma = 1");
  }
  if (!(a.front() > b.front())) {
    throw InputError("schedule needs A(0) > B(0)");
  }
  if (!(a.back() < b.back())) {
    throw InputError("schedule needs A(1) < B(1)");
  }
}

AnnealSchedule parse_schedule(std::string_view text) {
  AnnealSchedule schedule;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string token; fields >> token;) {
      tokens.push_back(token);
    }
    if (tokens.empty()) {
      continue;
    }
    if (!header) {
      if (tokens != std::vector<std::string>{"gamma", "A", "B"}) {
        throw ParseError(number, "expected header \"gamma A B\"");
      }
      header = true;
      continue;
    }
    if (tokens.size() != 3) {
      throw ParseError(number, "expected three numbers");
    }
    double values[3];
    for (int i = 0; i < 3; ++i) {
      std::size_t used = 0;
      try {
        values[i] = std::stod(tokens[i], &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != tokens[i].size()) {
        throw ParseError(number, "not a number: " + tokens[i]);
      }
    }
    schedule.gamma.push_back(values[0]);
    schedule.a.push_back(values[1]);
    schedule.b.push_back(values[2]);
  }
  if (!header) {
    throw ParseError(number == 0 ? 1 : number, "empty schedule file");
  }
  schedule.validate();
  return schedule;
}

AnnealSchedule load_schedule(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open schedule file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_schedule(buffer.str());
}

std::vector<double> problem_diagonal(const IsingProblem &ising) {
  check_size(ising, kMaxGroundSpaceSpins, "problem_diagonal");
  const std::size_t n = ising.num_spins;
  std::vector<double> diag(std::size_t{1} << n, 0.0);
  for (std::size_t s = 0; s < diag.size(); ++s) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e += ((s >> i) & 1u) ? ising.h[i] : -ising.h[i];
    }
    for (const auto &[key, value] : ising.j) {
      bool same = ((s >> key.first) & 1u) == ((s >> key.second) & 1u);
      e += same ? value : -value;
    }
    diag[s] = e;
  }
  return diag;
}

void apply_hamiltonian(std::span<const double> diag, std::size_t num_spins, double a, double b,
                       std::span<const Complex> psi, std::span<Complex> out) {
  const std::size_t dim = diag.size();
  const double half_a = -0.5 * a;
  const double half_b = 0.5 * b;
  for (std::size_t s = 0; s < dim; ++s) {
    out[s] = half_b * diag[s] * psi[s];
  }
  for (std::size_t i = 0; i < num_spins; ++i) {
    const std::size_t stride = std::size_t{1} << i;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t s = base; s < base + stride; ++s) {
        out[s] += half_a * psi[s + stride];
        out[s + stride] += half_a * psi[s];
      }
    }
  }
}

GroundSpace ground_space(const IsingProblem &ising) {
  check_size(ising, kMaxGroundSpaceSpins, "ground_space");
  const std::size_t n = ising.num_spins;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacent(n);
  for (const auto &[key, value] : ising.j) {
    adjacent[key.first].push_back({key.second, value});
    adjacent[key.second].push_back({key.first, value});
  }
  std::vector<std::int8_t> sigma(n, -1);
  double energy = ising.energy(sigma);
  GroundSpace best{energy, {0}};
  std::uint64_t state = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    auto i = static_cast<std::size_t>(std::countr_zero(step));
    double local = ising.h[i];
    for (const auto &[j, value] : adjacent[i]) {
      local += value * sigma[j];
    }
    energy -= 2.0 * sigma[i] * local;
    sigma[i] = static_cast<std::int8_t>(-sigma[i]);
    state ^= std::uint64_t{1} << i;
    if (energy < best.energy - 1e-9) {
      best.energy = energy;
      best.states.assign(1, state);
    } else if (energy <= best.energy + 1e-9) {
      best.states.push_back(state);
    }
  }
  std::sort(best.states.begin(), best.states.end());
  return best;
}

std::size_t default_steps(const IsingProblem &ising, const AnnealSchedule &schedule, double anneal_time) {
  std::vector<double> diag = problem_diagonal(ising);
  auto [lo, hi] = std::minmax_element(diag.begin(), diag.end());
  const double half_range = 0.5 * (*hi - *lo);
  double bound = 0.0;
  for (std::size_t i = 0; i < schedule.gamma.size(); ++i) {
    bound = std::max(bound, 0.5 * (std::abs(schedule.a[i]) * static_cast<double>(ising.num_spins) +
                                   std::abs(schedule.b[i]) * half_range));
  }
  double steps = std::max(2000.0, std::ceil(200.0 * anneal_time));
  steps = std::max(steps, std::ceil(anneal_time * bound / 0.1));
  return static_cast<std::size_t>(steps);
}

SimResult evolve(const IsingProblem &ising, const AnnealSchedule &schedule, const SimParams &params) {
  check_size(ising, kMaxSimSpins, "evolve");
  schedule.validate();
  if (!(params.anneal_time > 0.0)) {
    throw InputError("anneal time must be positive");
  }
  if (params.steps != 0 && params.steps < 100) {
    throw InputError("integrator needs at least 100 steps");
  }
  if (!(params.renorm_tolerance > 0.0) || params.renorm_tolerance > 1e-6) {
    throw InputError("renormalization tolerance must lie in (0, 1e-6]");
  }
  const std::size_t n = ising.num_spins;
  std::vector<double> diag = problem_diagonal(ising);
  const GroundSpace ground = ground_space(ising);

  // A multiple of the identity only changes the global phase.
  auto [lo, hi] = std::minmax_element(diag.begin(), diag.end());
  const double center = 0.5 * (*lo + *hi);
  std::vector<double> shifted(diag);
  for (double &d : shifted) {
    d -= center;
  }

  SimResult result;
  result.steps = params.steps != 0 ? params.steps : default_steps(ising, schedule, params.anneal_time);
  result.ground_space_dimension = ground.states.size();

  const std::size_t dim = diag.size();
  std::vector<Complex> psi(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  std::vector<Complex> k(dim), acc(dim), probe(dim);
  const double dt = params.anneal_time / static_cast<double>(result.steps);
  const Complex minus_i(0.0, -1.0);
  const std::size_t trace_every =
      params.trace_points == 0 ? 0 : std::max<std::size_t>(1, result.steps / params.trace_points);

  auto record = [&](double g) {
    apply_hamiltonian(diag, n, schedule.a_at(g), schedule.b_at(g), psi, probe);
    Complex e(0.0, 0.0);
    for (std::size_t s = 0; s < dim; ++s) {
      e += std::conj(psi[s]) * probe[s];
    }
    result.energy_trace.push_back({g, e.real()});
  };
  if (trace_every != 0) {
    record(0.0);
  }

  // k_m = -i H(t_m) y_m;  psi += dt/6 (k1 + 2 k2 + 2 k3 + k4).
  auto derivative = [&](double t, std::span<const Complex> y) {
    double g = std::min(t / params.anneal_time, 1.0);
    apply_hamiltonian(shifted, n, schedule.a_at(g), schedule.b_at(g), y, k);
    for (Complex &c : k) {
      c *= minus_i;
    }
  };

  double norm = 1.0;
  for (std::size_t step = 0; step < result.steps; ++step) {
    const double t = dt * static_cast<double>(step);
    derivative(t, psi);
    for (std::size_t s = 0; s < dim; ++s) {
      acc[s] = k[s];
      probe[s] = psi[s] + 0.5 * dt * k[s];
    }
    derivative(t + 0.5 * dt, probe);
    for (std::size_t s = 0; s < dim; ++s) {
      acc[s] += 2.0 * k[s];
      probe[s] = psi[s] + 0.5 * dt * k[s];
    }
    derivative(t + 0.5 * dt, probe);
    for (std::size_t s = 0; s < dim; ++s) {
      acc[s] += 2.0 * k[s];
      probe[s] = psi[s] + dt * k[s];
    }
    derivative(t + dt, probe);
    for (std::size_t s = 0; s < dim; ++s) {
      psi[s] += (dt / 6.0) * (acc[s] + k[s]);
    }

    const double after = norm_of(psi);
    if (std::abs(after / norm - 1.0) > 1e-6) {
      throw InputError("integrator step too large: norm changed by more than 1e-6 in one step; use more steps");
    }
    norm = after;
    result.max_drift = std::max(result.max_drift, std::abs(norm - 1.0));
    if (std::abs(norm - 1.0) > params.renorm_tolerance) {
      for (Complex &c : psi) {
        c /= norm;
      }
      norm = 1.0;
      ++result.renormalizations;
    }
    if (trace_every != 0 && ((step + 1) % trace_every == 0 || step + 1 == result.steps)) {
      record(static_cast<double>(step + 1) / static_cast<double>(result.steps));
    }
  }

  result.final_norm = norm_of(psi);
  double overlap = 0.0;
  for (std::uint64_t s : ground.states) {
    overlap += std::norm(psi[s]);
  }
  result.success_probability = std::clamp(overlap / (result.final_norm * result.final_norm), 0.0, 1.0);
  return result;
}

GapScan gap_scan(const IsingProblem &ising, const AnnealSchedule &schedule, double grid_step) {
  check_size(ising, kMaxDenseSpins, "gap_scan");
  schedule.validate();
  const std::vector<double> diag = problem_diagonal(ising);
  GapScan scan;
  scan.degeneracy = degeneracy_of(diag);
  const std::size_t level = std::min(scan.degeneracy, diag.size() - 1);
  scan.naive_gap = std::numeric_limits<double>::infinity();
  scan.gap = std::numeric_limits<double>::infinity();
  for (double g : grid(grid_step)) {
    Eigen::MatrixXd h = dense_hamiltonian(diag, ising.num_spins, schedule.a_at(g), schedule.b_at(g));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd &e = solver.eigenvalues();
    GapPoint point{g, e(0), e.size() > 1 ? e(1) : e(0), e(static_cast<Eigen::Index>(level))};
    if (point.e1 - point.e0 < scan.naive_gap) {
      scan.naive_gap = point.e1 - point.e0;
      scan.naive_gamma = g;
    }
    if (point.ed - point.e0 < scan.gap) {
      scan.gap = point.ed - point.e0;
      scan.gamma_star = g;
    }
    scan.curve.push_back(point);
  }
  return scan;
}

AdiabaticEstimate adiabatic_time_estimate(const IsingProblem &ising, const AnnealSchedule &schedule,
                                          double grid_step) {
  check_size(ising, kMaxDenseSpins, "adiabatic_time_estimate");
  schedule.validate();
  const std::vector<double> diag = problem_diagonal(ising);
  const std::size_t level = degeneracy_of(diag);
  if (level >= diag.size()) {
    throw InputError("problem Hamiltonian is constant; no gap to estimate");
  }
  const std::size_t n = ising.num_spins;
  AdiabaticEstimate out;
  out.gap = std::numeric_limits<double>::infinity();
  std::vector<Complex> ground(diag.size()), image(diag.size());
  for (double g : grid(grid_step)) {
    Eigen::MatrixXd h = dense_hamiltonian(diag, n, schedule.a_at(g), schedule.b_at(g));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const Eigen::VectorXd &e = solver.eigenvalues();
    const auto lvl = static_cast<Eigen::Index>(level);
    const double gap = e(lvl) - e(0);
    if (gap < out.gap) {
      out.gap = gap;
      out.gamma_star = g;
    }
    for (std::size_t s = 0; s < diag.size(); ++s) {
      ground[s] = solver.eigenvectors()(static_cast<Eigen::Index>(s), 0);
    }
    apply_hamiltonian(diag, n, schedule.a_slope(g), schedule.b_slope(g), ground, image);
    double element = 0.0;
    for (std::size_t s = 0; s < diag.size(); ++s) {
      element += solver.eigenvectors()(static_cast<Eigen::Index>(s), lvl) * image[s].real();
    }
    out.matrix_element = std::max(out.matrix_element, std::abs(element));
  }
  if (!(out.gap > 0.0)) {
    throw InvariantError("gap closes on the grid; adiabatic estimate undefined");
  }
  out.time = out.matrix_element / (out.gap * out.gap);
  return out;
}

}  // namespace qdist
