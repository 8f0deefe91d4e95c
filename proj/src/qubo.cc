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

#include "qdist/qubo.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "qdist/errors.hpp"

namespace qdist {

namespace {

/// constant + sum coeff * z_index
struct LinearForm {
  std::int64_t constant = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> terms;

  void add(std::size_t index, std::int64_t coeff) {
    if (coeff != 0) {
      terms.emplace_back(index, coeff);
    }
  }
};

/// q += weight * f * g, using z^2 = z.
void add_product(QuboProblem &q, const LinearForm &f, const LinearForm &g, std::int64_t weight) {
  q.add_offset(weight * f.constant * g.constant);
  for (const auto &[i, c] : g.terms) {
    q.add_linear(i, weight * f.constant * c);
  }
  for (const auto &[i, c] : f.terms) {
    q.add_linear(i, weight * g.constant * c);
  }
  for (const auto &[i, ci] : f.terms) {
    for (const auto &[j, cj] : g.terms) {
      q.add_quadratic(i, j, weight * ci * cj);
    }
  }
}

/// Integer row sums A x for a binary x.
std::vector<std::int64_t> integer_product(const BitMatrix &m, std::span<const std::uint8_t> x) {
  std::vector<std::int64_t> out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.get(r, c) && (x[c] & 1)) {
        ++out[r];
      }
    }
  }
  return out;
}

std::size_t max_row_weight(const BitMatrix &m) {
  std::size_t best = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    best = std::max(best, m.row_weight(r));
  }
  return best;
}

void write_bits(BitVector &z, std::size_t (VariableLayout::*index)(std::size_t, std::size_t) const,
                const VariableLayout &layout, std::size_t row, std::size_t width, std::int64_t value) {
  if (value < 0 || (width < 63 && static_cast<std::uint64_t>(value) >> width) != 0) {
    throw InvariantError("auxiliary value " + std::to_string(value) + " does not fit in " + std::to_string(width) +
                         " bits");
  }
  for (std::size_t bit = 0; bit < width; ++bit) {
    z[(layout.*index)(row, bit)] = static_cast<std::uint8_t>((value >> bit) & 1);
  }
}

QuboProblem add_constraint_penalty(QuboProblem q, std::size_t n, std::size_t constrained, std::size_t r) {
  if (q.is_clamped()) {
    throw std::invalid_argument("penalty terms must be added before clamping");
  }
  VariableLayout layout = q.layout();
  if (layout.r != 0) {
    throw std::invalid_argument("problem already carries penalty bits");
  }
  if (constrained > layout.num_x) {
    throw std::invalid_argument("penalty covers more variables than the x block holds");
  }
  layout.r = r;
  layout.constrained = constrained;
  std::size_t first_e = q.num_vars();
  q.append_variables(r);
  q.set_layout(layout);
  LinearForm f;
  f.constant = -1;
  for (std::size_t i = 0; i < constrained; ++i) {
    f.add(i, 1);
  }
  for (std::size_t j = 0; j < r; ++j) {
    f.add(first_e + j, -(std::int64_t{1} << j));
  }
  add_product(q, f, f, penalty_weight(n));
  return q;
}

}  // namespace

VarTag VariableLayout::tag(std::size_t index) const {
  if (index >= size()) {
    throw std::out_of_range("VariableLayout::tag: index " + std::to_string(index) + " out of range");
  }
  if (index < num_x) {
    return {VarRole::x, index, 0};
  }
  std::size_t rest = index - num_x;
  const std::pair<VarRole, std::size_t> blocks[] = {{VarRole::t, s_t}, {VarRole::u, s_u}, {VarRole::v, s_v}};
  for (const auto &[role, width] : blocks) {
    std::size_t block = width * num_rows;
    if (rest < block) {
      return {role, rest % num_rows, rest / num_rows};
    }
    rest -= block;
  }
  return {VarRole::e, 0, rest};
}

std::string VariableLayout::to_spec() const {
  std::ostringstream out;
  const char *kind_name = kind == BuilderKind::general ? "general" : kind == BuilderKind::selfdual ? "selfdual" : "plain";
  out << "kind=" << kind_name << " nx=" << num_x << " rows=" << num_rows << " st=" << s_t << " su=" << s_u
      << " sv=" << s_v << " r=" << r << " pc=" << constrained;
  return out.str();
}

VariableLayout VariableLayout::from_spec(std::string_view spec) {
  VariableLayout layout;
  std::istringstream in{std::string(spec)};
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InputError("layout entry '" + item + "' is not key=value");
    }
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "kind") {
      if (value == "general") {
        layout.kind = BuilderKind::general;
      } else if (value == "selfdual") {
        layout.kind = BuilderKind::selfdual;
      } else if (value == "plain") {
        layout.kind = BuilderKind::plain;
      } else {
        throw InputError("unknown layout kind '" + value + "'");
      }
      continue;
    }
    std::size_t parsed = 0;
    try {
      std::size_t used = 0;
      parsed = std::stoul(value, &used);
      if (used != value.size()) {
        throw std::invalid_argument(value);
      }
    } catch (const std::exception &) {
      throw InputError("layout value '" + value + "' for '" + key + "' is not a count");
    }
    if (key == "nx") {
      layout.num_x = parsed;
    } else if (key == "rows") {
      layout.num_rows = parsed;
    } else if (key == "st") {
      layout.s_t = parsed;
    } else if (key == "su") {
      layout.s_u = parsed;
    } else if (key == "sv") {
      layout.s_v = parsed;
    } else if (key == "r") {
      layout.r = parsed;
    } else if (key == "pc") {
      layout.constrained = parsed;
    } else {
      throw InputError("unknown layout key '" + key + "'");
    }
  }
  return layout;
}

QuboProblem::QuboProblem(std::size_t num_vars) : linear_(num_vars, 0) {
  layout_.num_x = num_vars;
}

std::int64_t QuboProblem::coefficient(std::size_t i, std::size_t j) const {
  if (i == j) {
    return linear_.at(i);
  }
  auto it = quadratic_.find({std::min(i, j), std::max(i, j)});
  return it == quadratic_.end() ? 0 : it->second;
}

void QuboProblem::add_linear(std::size_t i, std::int64_t value) { linear_.at(i) += value; }

void QuboProblem::add_quadratic(std::size_t i, std::size_t j, std::int64_t value) {
  if (i == j) {
    add_linear(i, value);
    return;
  }
  if (i >= num_vars() || j >= num_vars()) {
    throw std::out_of_range("QuboProblem::add_quadratic: index out of range");
  }
  if (value == 0) {
    return;
  }
  Pair key{std::min(i, j), std::max(i, j)};
  auto [it, inserted] = quadratic_.emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) {
      quadratic_.erase(it);
    }
  }
}

void QuboProblem::append_variables(std::size_t count) {
  if (is_clamped()) {
    throw std::logic_error("cannot append variables to a clamped problem");
  }
  linear_.resize(linear_.size() + count, 0);
}

std::int64_t QuboProblem::energy(std::span<const std::uint8_t> z) const {
  if (z.size() != num_vars()) {
    throw std::invalid_argument("QuboProblem::energy: assignment has " + std::to_string(z.size()) +
                                " entries, expected " + std::to_string(num_vars()));
  }
  std::int64_t e = offset_;
  for (std::size_t i = 0; i < linear_.size(); ++i) {
    if (z[i]) {
      e += linear_[i];
    }
  }
  for (const auto &[key, value] : quadratic_) {
    if (z[key.first] && z[key.second]) {
      e += value;
    }
  }
  return e;
}

void QuboProblem::set_fixed(std::vector<FixedVar> fixed) {
  std::sort(fixed.begin(), fixed.end(), [](const FixedVar &l, const FixedVar &r) { return l.index < r.index; });
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if ((i > 0 && fixed[i].index == fixed[i - 1].index) || fixed[i].index >= linear_.size() + fixed.size()) {
      throw InputError("invalid fixed-variable list");
    }
  }
  fixed_ = std::move(fixed);
}

std::size_t QuboProblem::original_index(std::size_t i) const {
  std::size_t index = i;
  for (const FixedVar &f : fixed_) {
    if (f.index <= index) {
      ++index;
    } else {
      break;
    }
  }
  return index;
}

BitVector QuboProblem::lift(std::span<const std::uint8_t> z) const {
  if (z.size() != num_vars()) {
    throw std::invalid_argument("QuboProblem::lift: assignment size mismatch");
  }
  BitVector full(original_num_vars(), 0);
  std::vector<bool> taken(full.size(), false);
  for (const FixedVar &f : fixed_) {
    full[f.index] = f.value;
    taken[f.index] = true;
  }
  std::size_t next = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (!taken[i]) {
      full[i] = z[next++];
    }
  }
  return full;
}

BitVector QuboProblem::restrict_assignment(std::span<const std::uint8_t> full) const {
  if (full.size() != original_num_vars()) {
    throw std::invalid_argument("QuboProblem::restrict_assignment: assignment size mismatch");
  }
  std::vector<bool> taken(full.size(), false);
  for (const FixedVar &f : fixed_) {
    taken[f.index] = true;
  }
  BitVector z;
  z.reserve(num_vars());
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (!taken[i]) {
      z.push_back(full[i]);
    }
  }
  return z;
}

double IsingProblem::energy(std::span<const std::int8_t> spins) const {
  double e = offset;
  for (std::size_t i = 0; i < num_spins; ++i) {
    e += h[i] * spins[i];
  }
  for (const auto &[key, value] : j) {
    e += value * spins[key.first] * spins[key.second];
  }
  return e;
}

double IsingProblem::energy_from_bits(std::span<const std::uint8_t> x) const {
  std::vector<std::int8_t> spins(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    spins[i] = x[i] ? 1 : -1;
  }
  return energy(spins);
}

std::size_t bit_length(std::uint64_t value) { return static_cast<std::size_t>(std::bit_width(value)); }

std::size_t ceil_log2(std::uint64_t value) { return value <= 1 ? 0 : bit_length(value - 1); }

AuxWidths aux_widths(const BitMatrix &a, const BitMatrix &b, WidthMode mode) {
  std::size_t max_a = max_row_weight(a);
  std::size_t max_b = max_row_weight(b);
  std::size_t max_ab = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    max_ab = std::max(max_ab, a.row_weight(r) + b.row_weight(r));
  }
  AuxWidths w{bit_length(max_a / 2), bit_length(max_b / 2), bit_length(max_ab / 2)};
  if (mode == WidthMode::paper) {
    std::size_t s = std::max(w.s_t, w.s_u);
    // 2s falls short of the v range only when s == 0.
    w = AuxWidths{s, s, std::max(2 * s, w.s_v)};
  }
  return w;
}

QuboProblem build_weight_qubo(const BitMatrix &normalizer, std::size_t n, WidthMode mode) {
  if (normalizer.rows() != 2 * n) {
    throw std::invalid_argument("build_weight_qubo: normalizer must have 2n rows");
  }
  BitMatrix a = normalizer.row_block(0, n);
  BitMatrix b = normalizer.row_block(n, n);
  AuxWidths widths = aux_widths(a, b, mode);

  VariableLayout layout;
  layout.kind = BuilderKind::general;
  layout.num_x = normalizer.cols();
  layout.num_rows = n;
  layout.s_t = widths.s_t;
  layout.s_u = widths.s_u;
  layout.s_v = widths.s_v;

  // Accumulate twice the cost so every coefficient stays integral, then halve.
  QuboProblem doubled(layout.size());
  for (std::size_t i = 0; i < n; ++i) {
    LinearForm ft, fu, fv;
    for (std::size_t j = 0; j < layout.num_x; ++j) {
      std::int64_t aij = a.get(i, j);
      std::int64_t bij = b.get(i, j);
      ft.add(j, aij);
      fu.add(j, bij);
      fv.add(j, aij + bij);
    }
    for (std::size_t l = 0; l < layout.s_t; ++l) {
      ft.add(layout.t_index(i, l), -(std::int64_t{2} << l));
    }
    for (std::size_t l = 0; l < layout.s_u; ++l) {
      fu.add(layout.u_index(i, l), -(std::int64_t{2} << l));
    }
    for (std::size_t l = 0; l < layout.s_v; ++l) {
      fv.add(layout.v_index(i, l), -(std::int64_t{2} << l));
    }
    add_product(doubled, ft, ft, 1);
    add_product(doubled, fu, fu, 1);
    add_product(doubled, fv, fv, 1);
  }

  QuboProblem q(layout.size());
  q.set_layout(layout);
  auto half = [](std::int64_t value) {
    if (value % 2 != 0) {
      throw InvariantError("weight QUBO expansion produced an odd doubled coefficient");
    }
    return value / 2;
  };
  q.add_offset(half(doubled.offset()));
  for (std::size_t i = 0; i < doubled.num_vars(); ++i) {
    q.add_linear(i, half(doubled.linear()[i]));
  }
  for (const auto &[key, value] : doubled.quadratic()) {
    q.add_quadratic(key.first, key.second, half(value));
  }
  return q;
}

QuboProblem build_selfdual_qubo(const GraphCode &graph) {
  const std::size_t n = graph.n;
  const BitMatrix &b = graph.adjacency;
  if (b.rows() != n || b.cols() != n) {
    throw InputError("graph adjacency must be n x n");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (b.get(i, j) != b.get(j, i)) {
        throw InputError("graph adjacency is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                         ")");
      }
    }
  }
  VariableLayout layout;
  layout.kind = BuilderKind::selfdual;
  layout.num_x = n;
  layout.num_rows = n;
  layout.s_u = bit_length(max_row_weight(b) / 2);

  QuboProblem q(layout.size());
  q.set_layout(layout);
  for (std::size_t i = 0; i < n; ++i) {
    q.add_linear(i, 1);
    LinearForm y;  // b_i - 2 u_i
    for (std::size_t j = 0; j < n; ++j) {
      y.add(j, b.get(i, j));
    }
    for (std::size_t l = 0; l < layout.s_u; ++l) {
      y.add(layout.u_index(i, l), -(std::int64_t{2} << l));
    }
    LinearForm y_minus_x = y;
    y_minus_x.add(i, -1);
    add_product(q, y, y_minus_x, 1);
  }
  return q;
}

AuxValues closed_form_aux(const BitMatrix &normalizer, std::size_t n, std::span<const std::uint8_t> x) {
  if (normalizer.rows() != 2 * n || x.size() != normalizer.cols()) {
    throw std::invalid_argument("closed_form_aux: dimension mismatch");
  }
  auto a = integer_product(normalizer.row_block(0, n), x);
  auto b = integer_product(normalizer.row_block(n, n), x);
  AuxValues aux;
  for (std::size_t i = 0; i < n; ++i) {
    aux.t.push_back(a[i] / 2);
    aux.u.push_back(b[i] / 2);
    aux.v.push_back((a[i] + b[i]) / 2);
  }
  return aux;
}

BitVector closed_form_assignment(const QuboProblem &q, const BitMatrix &normalizer, std::span<const std::uint8_t> x) {
  const VariableLayout &layout = q.layout();
  if (x.size() != layout.num_x) {
    throw std::invalid_argument("closed_form_assignment: x has the wrong length");
  }
  BitVector z(layout.size(), 0);
  std::copy(x.begin(), x.end(), z.begin());
  AuxValues aux = closed_form_aux(normalizer, layout.num_rows, x);
  for (std::size_t i = 0; i < layout.num_rows; ++i) {
    write_bits(z, &VariableLayout::u_index, layout, i, layout.s_u, aux.u[i]);
    if (layout.kind != BuilderKind::selfdual) {
      write_bits(z, &VariableLayout::t_index, layout, i, layout.s_t, aux.t[i]);
      write_bits(z, &VariableLayout::v_index, layout, i, layout.s_v, aux.v[i]);
    }
  }
  if (layout.r > 0) {
    std::int64_t count = 0;
    for (std::size_t i = 0; i < layout.constrained; ++i) {
      count += x[i] & 1;
    }
    if (count > 0) {
      for (std::size_t bit = 0; bit < layout.r; ++bit) {
        z[layout.e_index(bit)] = static_cast<std::uint8_t>(((count - 1) >> bit) & 1);
      }
    }
  }
  return z;
}

std::int64_t penalty_weight(std::size_t n) { return static_cast<std::int64_t>(n) + 1; }

QuboProblem add_logical_penalty(QuboProblem q, std::size_t n, std::size_t k) {
  if (k == 0) {
    throw InputError("logical penalty needs k >= 1; use the nonzero penalty for k = 0");
  }
  return add_constraint_penalty(std::move(q), n, 2 * k, std::max<std::size_t>(1, ceil_log2(2 * k)));
}

QuboProblem add_nonzero_penalty(QuboProblem q, std::size_t n) {
  return add_constraint_penalty(std::move(q), n, n, ceil_log2(n));
}

QuboProblem clamp(const QuboProblem &q, std::span<const FixedVar> assignments) {
  std::vector<int> value(q.num_vars(), -1);
  for (const FixedVar &f : assignments) {
    if (f.index >= q.num_vars()) {
      throw InputError("clamp index " + std::to_string(f.index) + " out of range");
    }
    int v = f.value & 1;
    if (value[f.index] != -1 && value[f.index] != v) {
      throw InputError("conflicting clamp values for variable " + std::to_string(f.index));
    }
    value[f.index] = v;
  }
  std::vector<std::size_t> new_index(q.num_vars(), 0);
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < q.num_vars(); ++i) {
    if (value[i] == -1) {
      new_index[i] = free_count++;
    }
  }
  QuboProblem out(free_count);
  out.layout_ = q.layout_;
  out.offset_ = q.offset_;
  out.fixed_ = q.fixed_;
  for (std::size_t i = 0; i < q.num_vars(); ++i) {
    if (value[i] == -1) {
      out.linear_[new_index[i]] += q.linear_[i];
    } else {
      out.offset_ += q.linear_[i] * value[i];
      out.fixed_.push_back({q.original_index(i), static_cast<std::uint8_t>(value[i])});
    }
  }
  for (const auto &[key, coeff] : q.quadratic_) {
    int vi = value[key.first];
    int vj = value[key.second];
    if (vi == -1 && vj == -1) {
      out.add_quadratic(new_index[key.first], new_index[key.second], coeff);
    } else if (vi == -1) {
      out.linear_[new_index[key.first]] += coeff * vj;
    } else if (vj == -1) {
      out.linear_[new_index[key.second]] += coeff * vi;
    } else {
      out.offset_ += coeff * vi * vj;
    }
  }
  std::sort(out.fixed_.begin(), out.fixed_.end(),
            [](const FixedVar &l, const FixedVar &r) { return l.index < r.index; });
  return out;
}

std::vector<QuboProblem> split_constraints(const QuboProblem &q, std::size_t prefix_len) {
  if (prefix_len > q.layout().num_x || prefix_len > q.num_vars()) {
    throw std::invalid_argument("split_constraints: prefix longer than the x block");
  }
  std::vector<QuboProblem> out;
  out.reserve(prefix_len);
  for (std::size_t i = 0; i < prefix_len; ++i) {
    std::vector<FixedVar> fixed;
    for (std::size_t j = 0; j < i; ++j) {
      fixed.push_back({j, 0});
    }
    fixed.push_back({i, 1});
    out.push_back(clamp(q, fixed));
  }
  return out;
}

IsingProblem to_ising(const QuboProblem &q) {
  IsingProblem ising;
  ising.num_spins = q.num_vars();
  ising.h.assign(q.num_vars(), 0.0);
  ising.offset = static_cast<double>(q.offset());
  for (std::size_t i = 0; i < q.num_vars(); ++i) {
    double l = static_cast<double>(q.linear()[i]);
    ising.h[i] += l / 2.0;
    ising.offset += l / 2.0;
  }
  for (const auto &[key, coeff] : q.quadratic()) {
    double c = static_cast<double>(coeff) / 4.0;
    ising.h[key.first] += c;
    ising.h[key.second] += c;
    ising.offset += c;
    ising.j[key] = c;
  }
  return ising;
}

std::string_view to_string(BuildMode mode) {
  switch (mode) {
    case BuildMode::penalty:
      return "penalty";
    case BuildMode::split:
      return "split";
    case BuildMode::selfdual:
      return "selfdual";
    case BuildMode::circulant:
      return "circulant";
  }
  return "?";
}

BuildMode parse_build_mode(std::string_view text) {
  for (BuildMode mode : {BuildMode::penalty, BuildMode::split, BuildMode::selfdual, BuildMode::circulant}) {
    if (to_string(mode) == text) {
      return mode;
    }
  }
  throw InputError("unknown build mode '" + std::string(text) + "'");
}

BuildMode default_build_mode(const CodeFile &file) {
  if (file.circulant) {
    return BuildMode::circulant;
  }
  if (file.graph) {
    return BuildMode::selfdual;
  }
  return BuildMode::penalty;
}

std::vector<QuboProblem> build_distance_qubos(const CodeFile &file, BuildMode mode, WidthMode widths) {
  const StabilizerCode &code = file.code;
  const std::size_t n = code.n();
  const std::size_t k = code.k();
  switch (mode) {
    case BuildMode::penalty: {
      QuboProblem q = build_weight_qubo(code.normalizer(), n, widths);
      return {k > 0 ? add_logical_penalty(std::move(q), n, k) : add_nonzero_penalty(std::move(q), n)};
    }
    case BuildMode::split:
      return split_constraints(build_weight_qubo(code.normalizer(), n, widths), k > 0 ? 2 * k : n);
    case BuildMode::selfdual:
      if (!file.graph) {
        throw InputError("selfdual mode needs a code given in graph or circulant form");
      }
      return {add_nonzero_penalty(build_selfdual_qubo(*file.graph), n)};
    case BuildMode::circulant: {
      if (!file.circulant) {
        throw InputError("circulant mode needs a code given in circulant form");
      }
      const FixedVar first{0, 1};
      return {clamp(build_selfdual_qubo(*file.graph), std::span(&first, 1))};
    }
  }
  throw std::invalid_argument("unknown build mode");
}

BitVector x_assignment(const QuboProblem &q, std::span<const std::uint8_t> z) {
  BitVector full = q.lift(z);
  full.resize(q.layout().num_x);
  return full;
}

std::optional<std::size_t> decoded_weight(const StabilizerCode &code, const QuboProblem &q,
                                          std::span<const std::uint8_t> z) {
  BitVector x = x_assignment(q, z);
  if (x.size() != code.n() + code.k()) {
    throw std::invalid_argument("decoded_weight: layout does not match the code");
  }
  std::size_t constrained = code.k() > 0 ? 2 * code.k() : code.n();
  bool feasible = std::any_of(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(constrained),
                              [](std::uint8_t bit) { return bit != 0; });
  if (!feasible) {
    return std::nullopt;
  }
  return weight_of_element(code, x);
}

}  // namespace qdist
