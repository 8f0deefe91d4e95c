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
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "compact_qubo.hpp"
#include "qdist/errors.hpp"
#include "qdist/solvers.hpp"

namespace qdist {

namespace {

using detail::CompactQubo;

constexpr std::size_t kComponentLimit = 12;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

constexpr double kMaxLog2Work = 36.0;

struct Plan {
  std::vector<std::size_t> enumerated;
  std::vector<std::vector<std::size_t>> components;
  double log2_work = 0.0;
};

std::vector<std::vector<std::size_t>> components_outside(const CompactQubo &c, const std::vector<bool> &in_s) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(c.n, false);
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < c.n; ++root) {
    if (in_s[root] || seen[root]) {
      continue;
    }
    std::vector<std::size_t> members;
    stack.push_back(root);
    seen[root] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (std::size_t p = c.start[v]; p < c.start[v + 1]; ++p) {
        std::size_t w = c.neighbor[p];
        if (!in_s[w] && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

double log2_cost_plain(std::size_t n) { return static_cast<double>(n) + std::log2(static_cast<double>(n) + 1.0); }

Plan make_plan(const CompactQubo &c) {
  std::vector<bool> in_s(c.n, false);
  std::vector<std::vector<std::size_t>> comps;
  for (;;) {
    comps = components_outside(c, in_s);
    std::size_t largest = kNone;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (largest == kNone || comps[i].size() > comps[largest].size()) {
        largest = i;
      }
    }
    if (largest == kNone || comps[largest].size() <= kComponentLimit) {
      break;
    }
    std::size_t pick = kNone, pick_degree = 0;
    for (std::size_t v : comps[largest]) {
      std::size_t degree = 0;
      for (std::size_t p = c.start[v]; p < c.start[v + 1]; ++p) {
        degree += !in_s[c.neighbor[p]];
      }
      if (pick == kNone || degree > pick_degree) {
        pick = v;
        pick_degree = degree;
      }
    }
    in_s[pick] = true;
  }

  Plan separated;
  for (std::size_t v = 0; v < c.n; ++v) {
    if (in_s[v]) {
      separated.enumerated.push_back(v);
    }
  }
  separated.components = std::move(comps);

  Plan plain;
  for (std::size_t v = 0; v < c.n; ++v) {
    plain.enumerated.push_back(v);
  }
  plain.log2_work = log2_cost_plain(c.n);
  // Per enumerated step the separated plan pays for re-minimizing the
  // components next to the flipped variable.
  double step = static_cast<double>(separated.enumerated.size()) + 1.0;
  if (!separated.enumerated.empty()) {
    std::vector<std::size_t> comp_of(c.n, kNone);
    for (std::size_t i = 0; i < separated.components.size(); ++i) {
      for (std::size_t v : separated.components[i]) {
        comp_of[v] = i;
      }
    }
    double touched = 0.0;
    for (std::size_t s : separated.enumerated) {
      std::vector<std::size_t> adjacent;
      for (std::size_t p = c.start[s]; p < c.start[s + 1]; ++p) {
        std::size_t comp = comp_of[c.neighbor[p]];
        if (comp != kNone && std::find(adjacent.begin(), adjacent.end(), comp) == adjacent.end()) {
          adjacent.push_back(comp);
        }
      }
      for (std::size_t comp : adjacent) {
        double size = static_cast<double>(separated.components[comp].size());
        touched += std::exp2(size) * size;
      }
    }
    step += touched / static_cast<double>(separated.enumerated.size());
  }
  separated.log2_work = static_cast<double>(separated.enumerated.size()) + std::log2(step);
  if (c.n > kMaxExactWidth) {
    return separated;
  }
  return separated.log2_work < plain.log2_work ? separated : plain;
}

/// One small component: exhaustive minimization of
///   sum_v field[v] y_v + sum_{v<w} Q_vw y_v y_w.
struct Component {
  std::vector<std::size_t> vars;
  std::vector<std::int64_t> couplings;  // dense size x size, zero diagonal

  std::int64_t minimize(const std::vector<std::int64_t> &field, std::uint64_t *argmin_gray) const {
    const std::size_t size = vars.size();
    if (size == 1 && argmin_gray == nullptr) {
      return std::min<std::int64_t>(0, field[vars[0]]);
    }
    std::int64_t h[kComponentLimit];
    std::uint8_t y[kComponentLimit] = {};
    for (std::size_t l = 0; l < size; ++l) {
      h[l] = field[vars[l]];
    }
    std::int64_t value = 0, best = 0;
    std::uint64_t best_t = 0;
    const std::uint64_t total = std::uint64_t{1} << size;
    for (std::uint64_t t = 1; t < total; ++t) {
      std::size_t b = static_cast<std::size_t>(std::countr_zero(t));
      value += y[b] ? -h[b] : h[b];
      y[b] ^= 1;
      const std::int64_t sign = y[b] ? 1 : -1;
      const std::int64_t *row = couplings.data() + b * size;
      for (std::size_t l = 0; l < size; ++l) {
        h[l] += sign * row[l];
      }
      if (value < best) {
        best = value;
        best_t = t;
      }
    }
    if (argmin_gray != nullptr) {
      *argmin_gray = best_t ^ (best_t >> 1);
    }
    return best;
  }
};

}  // namespace

std::size_t exact_search_width(const QuboProblem &q) { return make_plan(CompactQubo(q)).enumerated.size(); }

SolveResult solve_exact(const QuboProblem &q) {
  const auto started = std::chrono::steady_clock::now();
  const CompactQubo c(q);
  const Plan plan = make_plan(c);
  const std::size_t m = plan.enumerated.size();
  if (m > kMaxExactWidth) {
    throw SizeGuardError("exact solver would enumerate " + std::to_string(m) + " variables jointly (limit " +
                         std::to_string(kMaxExactWidth) + "); use the sa or decomposed solver");
  }
  if (plan.log2_work > kMaxLog2Work) {
    throw SizeGuardError("exact solver would need about 2^" + std::to_string(static_cast<int>(plan.log2_work)) +
                         " operations; use the sa or decomposed solver");
  }

  std::vector<std::size_t> pos_in_s(c.n, kNone), comp_of(c.n, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    pos_in_s[plan.enumerated[i]] = i;
  }
  std::vector<Component> comps(plan.components.size());
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    Component &comp = comps[ci];
    comp.vars = plan.components[ci];
    const std::size_t size = comp.vars.size();
    comp.couplings.assign(size * size, 0);
    for (std::size_t l = 0; l < size; ++l) {
      comp_of[comp.vars[l]] = ci;
    }
    for (std::size_t l = 0; l < size; ++l) {
      std::size_t v = comp.vars[l];
      for (std::size_t p = c.start[v]; p < c.start[v + 1]; ++p) {
        std::size_t w = c.neighbor[p];
        if (comp_of[w] == ci) {
          auto lw = static_cast<std::size_t>(std::lower_bound(comp.vars.begin(), comp.vars.end(), w) - comp.vars.begin());
          comp.couplings[l * size + lw] = c.weight[p];
        }
      }
    }
  }

  // Couplings inside S (dense) and from S to component variables.
  std::vector<std::int64_t> s_couplings(m * m, 0);
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> s_out(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t s = plan.enumerated[i];
    for (std::size_t p = c.start[s]; p < c.start[s + 1]; ++p) {
      std::size_t w = c.neighbor[p];
      if (pos_in_s[w] != kNone) {
        s_couplings[i * m + pos_in_s[w]] = c.weight[p];
      } else {
        s_out[i].emplace_back(w, c.weight[p]);
      }
    }
  }

  std::vector<std::int64_t> field(c.linear);  // component variables
  std::vector<std::int64_t> s_field(m);
  for (std::size_t i = 0; i < m; ++i) {
    s_field[i] = c.linear[plan.enumerated[i]];
  }
  std::vector<std::int64_t> comp_min(comps.size());
  std::int64_t sum_min = 0;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    comp_min[ci] = comps[ci].minimize(field, nullptr);
    sum_min += comp_min[ci];
  }

  std::vector<std::uint8_t> zs(m, 0);
  std::vector<std::uint64_t> stamp(comps.size(), 0);
  std::vector<std::size_t> dirty;
  std::int64_t e_s = c.offset;
  std::int64_t best = e_s + sum_min;
  std::uint64_t best_t = 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t t = 1; t < total; ++t) {
    const std::size_t b = static_cast<std::size_t>(std::countr_zero(t));
    e_s += zs[b] ? -s_field[b] : s_field[b];
    zs[b] ^= 1;
    const std::int64_t sign = zs[b] ? 1 : -1;
    const std::int64_t *row = s_couplings.data() + b * m;
    for (std::size_t j = 0; j < m; ++j) {
      s_field[j] += sign * row[j];
    }
    dirty.clear();
    for (const auto &[v, w] : s_out[b]) {
      field[v] += sign * w;
      std::size_t ci = comp_of[v];
      if (stamp[ci] != t) {
        stamp[ci] = t;
        dirty.push_back(ci);
      }
    }
    for (std::size_t ci : dirty) {
      std::int64_t fresh = comps[ci].minimize(field, nullptr);
      sum_min += fresh - comp_min[ci];
      comp_min[ci] = fresh;
    }
    if (e_s + sum_min < best) {
      best = e_s + sum_min;
      best_t = t;
    }
  }

  // Rebuild the optimum: S from the Gray code of best_t, components by
  // re-minimizing against that assignment.
  BitVector z(c.n, 0);
  const std::uint64_t gray = best_t ^ (best_t >> 1);
  for (std::size_t i = 0; i < m; ++i) {
    z[plan.enumerated[i]] = static_cast<std::uint8_t>((gray >> i) & 1);
  }
  std::vector<std::int64_t> final_field = c.fields(z);
  for (const Component &comp : comps) {
    std::uint64_t pattern = 0;
    comp.minimize(final_field, &pattern);
    for (std::size_t l = 0; l < comp.vars.size(); ++l) {
      z[comp.vars[l]] = static_cast<std::uint8_t>((pattern >> l) & 1);
    }
  }

  SolveResult result;
  result.solver = "exact";
  result.best_assignment = std::move(z);
  result.best_energy = best;
  result.distance_bound = best;
  result.evaluations = total;
  result.restarts_used = 1;
  result.params = {{"enumerated", m}, {"components", comps.size()}};
  result.wall_time = std::chrono::steady_clock::now() - started;
  verify_result(q, result);
  return result;
}

void verify_result(const QuboProblem &q, const SolveResult &result) {
  if (result.best_assignment.size() != q.num_vars() || q.energy(result.best_assignment) != result.best_energy) {
    throw InvariantError(result.solver + " solver: reported energy does not match its assignment");
  }
}

double approximation_ratio(std::int64_t found, std::int64_t exact) {
  if (exact <= 0) {
    throw InputError("approximation ratio needs a positive exact value, got " + std::to_string(exact));
  }
  return static_cast<double>(found) / static_cast<double>(exact);
}

double success_rate(std::span<const SolveResult> trials, std::int64_t exact) {
  if (trials.empty()) {
    throw InputError("success rate of an empty trial list");
  }
  std::size_t hits = 0;
  for (const SolveResult &r : trials) {
    hits += r.best_energy == exact;
  }
  return static_cast<double>(hits) / static_cast<double>(trials.size());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(master ^ mix(index));
}

}  // namespace qdist
