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

// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "qdist/annealsim.hpp"
#include "qdist/distance.hpp"
#include "qdist/solvers.hpp"
#include "support/oracles.hpp"

using namespace qdist;
using namespace qdist::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<double> values;  // compared by the determinism criterion

  void require(bool condition, const std::string &what) {
    if (!condition && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::size_t pauli_weight_of(const StabilizerCode &code, const BitVector &x) {
  return letter_weight(to_pauli_string(naive_matvec(code.normalizer(), x)));
}

std::size_t width_for(std::size_t max_value) {
  std::size_t bits = 0;
  for (std::size_t v = max_value / 2; v > 0; v /= 2) {
    ++bits;
  }
  return bits;
}

std::size_t log2_ceil(std::size_t v) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < v) {
    ++bits;
  }
  return bits;
}

std::size_t max_row_ones(const StabilizerCode &code, std::size_t begin, bool sum_both) {
  const BitMatrix &g = code.normalizer();
  const std::size_t n = code.n();
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < g.cols(); ++j) {
      ones += g.get(begin + i, j);
      if (sum_both) {
        ones += g.get(n + i, j);
      }
    }
    best = std::max(best, ones);
  }
  return best;
}

/// 25 random codes with n + k <= 8 followed by every palindromic circulant
/// with n <= 6.
std::vector<CodeFile> code_suite() {
  Rng rng(2026);
  std::vector<CodeFile> suite;
  for (int i = 0; i < 25; ++i) {
    std::size_t n = 2 + rng() % 6;
    std::size_t k = rng() % std::min<std::size_t>(n, 9 - n);
    CodeFile file;
    file.id = "random" + std::to_string(i);
    file.code = random_code(rng, n, k);
    suite.push_back(std::move(file));
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    for (CodeFile &file : palindromic_circulants(n)) {
      suite.push_back(std::move(file));
    }
  }
  return suite;
}

std::vector<BuildMode> modes_for(const CodeFile &file) {
  std::vector<BuildMode> modes{BuildMode::penalty, BuildMode::split};
  if (file.circulant) {
    modes.push_back(BuildMode::selfdual);
    modes.push_back(BuildMode::circulant);
  }
  return modes;
}

Outcome parity_identity() {
  Outcome o;
  for (std::int64_t a = 0; a <= 8; ++a) {
    for (std::int64_t b = 0; b <= 8; ++b) {
      std::int64_t alpha = a % 2, beta = b % 2;
      std::int64_t weight = alpha * alpha + beta * beta - alpha * beta;
      std::int64_t sum = a % 2 + b % 2 + (a + b) % 2;
      o.require(2 * weight == sum, "parity identity fails at a=" + std::to_string(a) + " b=" + std::to_string(b));
      o.values.push_back(static_cast<double>(sum));
    }
  }
  o.detail = o.pass ? "81 pairs" : o.detail;
  return o;
}

Outcome aux_minimum() {
  Outcome o;
  std::size_t checked = 0;
  for (const CodeFile &file : code_suite()) {
    const StabilizerCode &code = file.code;
    const std::size_t n = code.n(), k = code.k();
    std::vector<QuboProblem> builders{build_weight_qubo(code.normalizer(), n)};
    if (file.graph) {
      builders.push_back(build_selfdual_qubo(*file.graph));
    }
    for (const QuboProblem &q : builders) {
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << (n + k)); ++s) {
        BitVector x = bits_of(s, n + k);
        auto weight = static_cast<std::int64_t>(pauli_weight_of(code, x));
        std::int64_t minimum = min_over_aux(q, x);
        std::int64_t closed = q.energy(closed_form_assignment(q, code.normalizer(), x));
        o.require(minimum == weight, file.id + ": aux minimum differs from the weight");
        o.require(closed == weight, file.id + ": closed-form auxiliaries miss the weight");
        o.values.push_back(static_cast<double>(minimum));
        ++checked;
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " (code, x) pairs";
  }
  return o;
}

Outcome end_to_end() {
  Outcome o;
  std::size_t instances = 0;
  for (const CodeFile &file : code_suite()) {
    const auto d = static_cast<std::int64_t>(min_distance_bruteforce(file.code).d);
    for (BuildMode mode : modes_for(file)) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const QuboProblem &q : build_distance_qubos(file, mode)) {
        best = std::min(best, solve_exact(q).best_energy);
        ++instances;
      }
      o.require(best == d, file.id + " " + std::string(to_string(mode)) + ": minimum " + std::to_string(best) +
                               " != d " + std::to_string(d));
      o.values.push_back(static_cast<double>(best));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(instances) + " instances";
  }
  return o;
}

Outcome variable_count() {
  Outcome o;
  std::size_t instances = 0;
  for (const CodeFile &file : code_suite()) {
    const StabilizerCode &code = file.code;
    const std::size_t n = code.n(), k = code.k();
    std::size_t s_t = width_for(max_row_ones(code, 0, false));
    std::size_t s_u = width_for(max_row_ones(code, n, false));
    std::size_t s_v = width_for(max_row_ones(code, 0, true));
    for (BuildMode mode : modes_for(file)) {
      std::vector<QuboProblem> qs = build_distance_qubos(file, mode);
      for (std::size_t i = 0; i < qs.size(); ++i) {
        std::size_t expected = 0;
        switch (mode) {
          case BuildMode::penalty:
            expected = n + k + n * (s_t + s_u + s_v) + (k > 0 ? std::max<std::size_t>(1, log2_ceil(2 * k)) : log2_ceil(n));
            break;
          case BuildMode::split:
            expected = n + k + n * (s_t + s_u + s_v) - (i + 1);
            break;
          case BuildMode::selfdual:
            expected = n + n * s_u + log2_ceil(n);
            break;
          case BuildMode::circulant:
            expected = n + n * s_u - 1;
            break;
        }
        o.require(qs[i].num_vars() == expected, file.id + " " + std::string(to_string(mode)) + ": " +
                                                    std::to_string(qs[i].num_vars()) + " variables, expected " +
                                                    std::to_string(expected));
        o.values.push_back(static_cast<double>(qs[i].num_vars()));
        ++instances;
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(instances) + " instances";
  }
  return o;
}

Outcome sa_competence() {
  Outcome o;
  std::ostringstream found;
  for (std::size_t n = 5; n <= 16; ++n) {
    CodeFile file = code_from_circulant(best_circulant(n), "circ" + std::to_string(n));
    const auto d = static_cast<std::int64_t>(min_distance_bruteforce(file.code).d);
    QuboProblem q = build_distance_qubos(file, BuildMode::circulant).front();
    SaParams p;
    p.restarts = 40;
    p.seed = n;
    SolveResult r = solve_sa(q, p);
    auto hits = std::count(r.restart_energies.begin(), r.restart_energies.end(), d);
    o.require(r.best_energy >= d, file.id + ": SA below the oracle distance");
    o.require(hits > 0, file.id + ": no restart reached d=" + std::to_string(d));
    found << " n" << n << ":d=" << d << "/" << hits << "of40";
    o.values.push_back(static_cast<double>(r.best_energy));
    o.values.push_back(static_cast<double>(hits));
  }
  o.detail = o.pass ? found.str().substr(1) : o.detail + ";" + found.str();
  return o;
}

Outcome decomposition() {
  Outcome o;
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 16 + rng() % 11;
    QuboProblem q = random_qubo(rng, n, 0.2 + 0.1 * static_cast<double>(trial % 5));
    std::int64_t exact = solve_exact(q).best_energy;
    DecomposeParams covering;
    covering.subproblem_size = 10;
    covering.exact_threshold = n;
    covering.seed = static_cast<std::uint64_t>(trial);
    DecomposeParams looping = covering;
    looping.exact_threshold = 10;
    for (const DecomposeParams &p : {covering, looping}) {
      SolveResult r = solve_decomposed(q, p);
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        o.require(r.trace[i].energy <= r.trace[i - 1].energy, "trace increases on problem " + std::to_string(trial));
      }
      o.require(r.best_energy >= exact, "decomposition below the exact minimum");
      o.values.push_back(static_cast<double>(r.best_energy));
    }
    o.require(o.values[o.values.size() - 2] == static_cast<double>(exact),
              "covering threshold misses the minimum on problem " + std::to_string(trial));
  }
  if (o.pass) {
    o.detail = "20 problems";
  }
  return o;
}

Outcome ising_map() {
  Outcome o;
  Rng rng(707);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 12;
    QuboProblem q = random_qubo(rng, n, 0.5);
    IsingProblem ising = to_ising(q);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      BitVector x = bits_of(s, n);
      std::vector<std::int8_t> sigma(n);
      for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = static_cast<std::int8_t>(x[i] ? 1 : -1);
      }
      o.require(ising.energy(sigma) == static_cast<double>(q.energy(x)), "energy mismatch");
    }
    o.values.push_back(ising.offset);
  }
  if (o.pass) {
    o.detail = "50 problems";
  }
  return o;
}

const std::vector<double> kAnnealGrid{1, 2, 5, 10, 20, 50, 100, 200};

Outcome annealing() {
  Outcome o;
  IsingProblem spin;
  spin.num_spins = 1;
  spin.h = {1.0};
  GapScan scan = gap_scan(spin, AnnealSchedule::linear(), 0.01);
  double mid = scan.curve[50].e1 - scan.curve[50].e0;
  o.require(std::abs(mid - std::sqrt(0.5)) <= 1e-6, "single-qubit gap at 0.5 is " + std::to_string(mid));
  o.require(std::abs(scan.naive_gap - std::sqrt(0.5)) <= 1e-6 && scan.naive_gamma == 0.5, "single-qubit g_min");
  o.values.push_back(scan.naive_gap);

  std::ostringstream summary;
  summary << "g_min=" << scan.naive_gap;
  for (std::size_t n = 3; n <= 5; ++n) {
    CodeFile file = code_from_circulant(best_circulant(n), "circ" + std::to_string(n));
    IsingProblem ising = to_ising(build_distance_qubos(file, BuildMode::circulant).front());
    o.require(ising.num_spins <= 13, file.id + ": too many spins");
    std::vector<double> ps;
    double drift = 0.0;
    for (double ta : kAnnealGrid) {
      SimParams p;
      p.anneal_time = ta;
      SimResult r = evolve(ising, AnnealSchedule::linear(), p);
      ps.push_back(r.success_probability);
      drift = std::max({drift, r.max_drift, std::abs(r.final_norm - 1.0)});
      if (ta == 10 || ta == kAnnealGrid.back()) {
        p.steps = 2 * r.steps;
        double fine = evolve(ising, AnnealSchedule::linear(), p).success_probability;
        o.require(std::abs(fine - r.success_probability) < 1e-4, file.id + ": step halving changes P_s");
      }
    }
    o.require(*std::max_element(ps.begin(), ps.end()) >= 0.9, file.id + ": P_s never reaches 0.9");
    o.require(ps.back() >= 0.99, file.id + ": P_s below 0.99 at the largest t_a");
    o.require(drift <= 1e-6, file.id + ": norm drift " + std::to_string(drift));
    std::size_t first = 0;
    while (ps[first] < 0.9) {
      ++first;
    }
    summary << " n" << n << ":N=" << ising.num_spins << ",t_a@0.9=" << kAnnealGrid[first] << ",P_s("
            << kAnnealGrid.back() << ")=" << ps.back();
    o.values.insert(o.values.end(), ps.begin(), ps.end());
  }
  if (o.pass) {
    o.detail = summary.str();
  }
  return o;
}

Outcome degeneracy() {
  Outcome o;
  std::ostringstream summary;
  for (std::size_t n = 3; n <= 5; ++n) {
    CodeFile file = code_from_circulant(best_circulant(n), "circ" + std::to_string(n));
    const StabilizerCode &code = file.code;
    DistanceReport oracle = min_distance_bruteforce(code);
    const auto d = static_cast<std::int64_t>(oracle.d);
    QuboProblem q = build_distance_qubos(file, BuildMode::circulant).front();
    GroundSpace ground = ground_space(to_ising(q));

    std::set<BitVector> decoded;
    for (std::uint64_t s : ground.states) {
      BitVector x = x_assignment(q, bits_of(s, q.num_vars()));
      decoded.insert(naive_matvec(code.normalizer(), x));
    }
    std::set<BitVector> anchored;
    for (const BitVector &c : oracle.minimizers) {
      if (c[0]) {
        anchored.insert(c);
      }
    }
    o.require(decoded == anchored, file.id + ": decoded ground space differs from the oracle minimizers");

    std::set<BitVector> closure;
    for (const BitVector &c : decoded) {
      for (std::size_t shift = 0; shift < n; ++shift) {
        BitVector rotated(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          rotated[(i + shift) % n] = c[i];
          rotated[n + (i + shift) % n] = c[n + i];
        }
        closure.insert(rotated);
      }
    }
    o.require(closure == std::set<BitVector>(oracle.minimizers.begin(), oracle.minimizers.end()),
              file.id + ": cyclic closure differs from the oracle set");

    // Expected dimension: optimal auxiliary completions of each anchored minimizer.
    QuboProblem full = build_selfdual_qubo(*file.graph);
    const std::size_t aux = full.num_vars() - n;
    std::size_t expected = 0;
    for (const BitVector &c : anchored) {
      BitVector z(full.num_vars(), 0);
      std::copy(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n), z.begin());
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << aux); ++s) {
        for (std::size_t b = 0; b < aux; ++b) {
          z[n + b] = (s >> b) & 1;
        }
        expected += full.energy(z) == d;
      }
    }
    o.require(ground.states.size() == expected, file.id + ": ground-space dimension " +
                                                    std::to_string(ground.states.size()) + " expected " +
                                                    std::to_string(expected));
    o.require(ground.energy == static_cast<double>(d), file.id + ": ground energy differs from d");
    summary << " n" << n << ":D=" << ground.states.size() << ",minimizers=" << oracle.minimizers.size();
    o.values.push_back(static_cast<double>(ground.states.size()));
  }
  if (o.pass) {
    o.detail = summary.str().substr(1);
  }
  return o;
}

std::string seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << s << " s";
  return out.str();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, 1, parity_identity},  {2, 60, aux_minimum},   {3, 300, end_to_end},
      {4, 60, variable_count},  {5, 600, sa_competence}, {6, 300, decomposition},
      {7, 60, ising_map},       {8, 1800, annealing},   {9, 60, degeneracy},
  };
  bool all = true;
  std::vector<std::vector<double>> first_values;
  for (const Criterion &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + seconds(c.limit_seconds) + " limit";
    }
    all = all && o.pass;
    first_values.push_back(o.values);
    std::printf("criterion %d: %s (%s; %s)\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds(elapsed).c_str());
    std::fflush(stdout);
  }

  auto start = std::chrono::steady_clock::now();
  bool same = true;
  std::string differing;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::vector<double> again;
    try {
      again = criteria[i].run().values;
    } catch (const std::exception &) {
    }
    if (again != first_values[i]) {
      same = false;
      differing += " " + std::to_string(criteria[i].id);
    }
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion 10: %s (%s; %s)\n", same ? "PASS" : "FAIL",
              same ? "criteria 1-9 repeat identically" : ("differs in" + differing).c_str(),
              seconds(elapsed).c_str());
  all = all && same;
  return all ? 0 : 1;
}
