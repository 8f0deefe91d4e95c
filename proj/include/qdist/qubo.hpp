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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdist/codes.hpp"
#include "qdist/gf2.hpp"

namespace qdist {

enum class VarRole : std::uint8_t { x, t, u, v, e };

struct VarTag {
  VarRole role;
  std::size_t row;  // x: the x index; e: 0
  std::size_t bit;  // bit position within the binary expansion; x: 0
  bool operator==(const VarTag &) const = default;
};

enum class BuilderKind : std::uint8_t { general, selfdual, plain };

/// Role map of QUBO variables, in the order
///   x_0..x_{nx-1},
///   t bits (bit-major: t_{0,0}, t_{1,0}, ..., t_{rows-1,0}, t_{0,1}, ...),
///   u bits, v bits (same ordering), then e_0..e_{r-1}.
struct VariableLayout {
  BuilderKind kind = BuilderKind::plain;
  std::size_t num_x = 0;
  std::size_t num_rows = 0;
  std::size_t s_t = 0;
  std::size_t s_u = 0;
  std::size_t s_v = 0;
  std::size_t r = 0;
  std::size_t constrained = 0;  // leading x variables covered by the penalty

  std::size_t size() const { return num_x + num_rows * (s_t + s_u + s_v) + r; }
  std::size_t t_index(std::size_t row, std::size_t bit) const { return num_x + bit * num_rows + row; }
  std::size_t u_index(std::size_t row, std::size_t bit) const {
    return num_x + num_rows * s_t + bit * num_rows + row;
  }
  std::size_t v_index(std::size_t row, std::size_t bit) const {
    return num_x + num_rows * (s_t + s_u) + bit * num_rows + row;
  }
  std::size_t e_index(std::size_t bit) const { return num_x + num_rows * (s_t + s_u + s_v) + bit; }

  VarTag tag(std::size_t index) const;

  /// "kind=general nx=6 rows=5 st=1 su=1 sv=2 r=1 pc=2"
  std::string to_spec() const;
  static VariableLayout from_spec(std::string_view spec);

  bool operator==(const VariableLayout &) const = default;
};

/// A variable fixed by clamping, in the numbering of the unclamped problem.
struct FixedVar {
  std::size_t index;
  std::uint8_t value;
  bool operator==(const FixedVar &) const = default;
};

/// energy(z) = offset + sum_i linear[i] z_i + sum_{i<j} quadratic[(i,j)] z_i z_j
///
/// All coefficients are integers. A clamped problem keeps the layout of the
/// problem it came from and records which original variables were fixed;
/// its own variables are the remaining ones in increasing original order.
class QuboProblem {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  QuboProblem() = default;
  explicit QuboProblem(std::size_t num_vars);

  std::size_t num_vars() const { return linear_.size(); }
  std::int64_t offset() const { return offset_; }
  const std::vector<std::int64_t> &linear() const { return linear_; }
  const std::map<Pair, std::int64_t> &quadratic() const { return quadratic_; }

  /// Upper-triangular coefficient; i == j gives the linear term.
  std::int64_t coefficient(std::size_t i, std::size_t j) const;

  void add_offset(std::int64_t value) { offset_ += value; }
  void add_linear(std::size_t i, std::int64_t value);
  /// Accumulates value * z_i z_j (i == j folds into the linear term).
  void add_quadratic(std::size_t i, std::size_t j, std::int64_t value);
  /// Appends `count` variables with zero coefficients.
  void append_variables(std::size_t count);

  std::int64_t energy(std::span<const std::uint8_t> z) const;

  const VariableLayout &layout() const { return layout_; }
  void set_layout(const VariableLayout &layout) { layout_ = layout; }

  /// Size of the unclamped problem this one derives from.
  std::size_t original_num_vars() const { return linear_.size() + fixed_.size(); }
  const std::vector<FixedVar> &fixed() const { return fixed_; }
  bool is_clamped() const { return !fixed_.empty(); }
  /// Restores clamp bookkeeping when reading a problem back from a file.
  void set_fixed(std::vector<FixedVar> fixed);
  std::size_t original_index(std::size_t i) const;

  /// Full assignment in the unclamped numbering.
  BitVector lift(std::span<const std::uint8_t> z) const;
  /// Inverse of lift: picks out this problem's variables from a full
  /// assignment. The fixed entries are not checked.
  BitVector restrict_assignment(std::span<const std::uint8_t> full) const;

  bool operator==(const QuboProblem &) const = default;

 private:
  friend QuboProblem clamp(const QuboProblem &q, std::span<const FixedVar> assignments);

  std::vector<std::int64_t> linear_;
  std::map<Pair, std::int64_t> quadratic_;
  std::int64_t offset_ = 0;
  VariableLayout layout_;
  std::vector<FixedVar> fixed_;
};

/// Spin form under x = (1 + s) / 2, s in {-1, +1}.
struct IsingProblem {
  std::size_t num_spins = 0;
  std::vector<double> h;
  std::map<std::pair<std::size_t, std::size_t>, double> j;  // i < j
  double offset = 0.0;

  double energy(std::span<const std::int8_t> spins) const;
  /// Energy of the spin configuration s_i = 2 x_i - 1.
  double energy_from_bits(std::span<const std::uint8_t> x) const;
};

enum class WidthMode : std::uint8_t {
  tight,  // per-block widths from the largest reachable value
  paper,  // uniform s for t and u, 2s for v
};

struct AuxWidths {
  std::size_t s_t = 0;
  std::size_t s_u = 0;
  std::size_t s_v = 0;
};

/// Number of bits needed to write `value` (0 for 0).
std::size_t bit_length(std::uint64_t value);
/// ceil(log2(value)), 0 for value <= 1.
std::size_t ceil_log2(std::uint64_t value);

/// Widths of the auxiliary integers for G = (A over B).
AuxWidths aux_widths(const BitMatrix &a, const BitMatrix &b, WidthMode mode);

/// Weight QUBO over (x, t, u, v) for a 2n x (n+k) normalizer matrix:
///   energy = 1/2 sum_i (a_i - 2t_i)^2 + (b_i - 2u_i)^2 + (a_i + b_i - 2v_i)^2
/// with a = A x, b = B x taken over the integers.
QuboProblem build_weight_qubo(const BitMatrix &normalizer, std::size_t n, WidthMode mode = WidthMode::tight);

/// Weight QUBO over (x, u) for a graph code:
///   energy = sum_i x_i + (b_i - 2u_i)(b_i - 2u_i - x_i),  b = B x.
QuboProblem build_selfdual_qubo(const GraphCode &graph);

struct AuxValues {
  std::vector<std::int64_t> t, u, v;
};

/// t_i = floor(a_i / 2), u_i = floor(b_i / 2), v_i = floor((a_i + b_i) / 2).
AuxValues closed_form_aux(const BitMatrix &normalizer, std::size_t n, std::span<const std::uint8_t> x);

/// Assignment of every variable of the unclamped layout of `q` for the given
/// x: closed-form auxiliaries (u only for self-dual layouts) and, when the
/// layout has penalty bits, the e-encoding of (sum of constrained x) - 1
/// whenever that sum is positive.
BitVector closed_form_assignment(const QuboProblem &q, const BitMatrix &normalizer, std::span<const std::uint8_t> x);

/// Weight of the penalty terms; larger than any distance of an n-qubit code.
std::int64_t penalty_weight(std::size_t n);

/// Adds (n+1) (sum_{i<2k} x_i - 1 - sum_j 2^j e_j)^2 with
/// r = max(1, ceil(log2 2k)) new e bits. Requires k >= 1.
QuboProblem add_logical_penalty(QuboProblem q, std::size_t n, std::size_t k);

/// Same with the sum over all n x variables and r = ceil(log2 n).
QuboProblem add_nonzero_penalty(QuboProblem q, std::size_t n);

/// Substitutes fixed values (indices in the numbering of `q`).
QuboProblem clamp(const QuboProblem &q, std::span<const FixedVar> assignments);

/// Instance i fixes x_0..x_{i-1} = 0 and x_i = 1, for i < prefix_len.
std::vector<QuboProblem> split_constraints(const QuboProblem &q, std::size_t prefix_len);

IsingProblem to_ising(const QuboProblem &q);

enum class BuildMode : std::uint8_t { penalty, split, selfdual, circulant };

std::string_view to_string(BuildMode mode);
BuildMode parse_build_mode(std::string_view text);
/// circulant for circulant input, selfdual for other graph input, else penalty.
BuildMode default_build_mode(const CodeFile &file);

/// All QUBO instances whose minimum over instances is the code distance.
std::vector<QuboProblem> build_distance_qubos(const CodeFile &file, BuildMode mode,
                                              WidthMode widths = WidthMode::tight);

/// The x block of a (possibly clamped) assignment.
BitVector x_assignment(const QuboProblem &q, std::span<const std::uint8_t> z);

/// Weight of the codeword G x encoded by `z` when x satisfies the distance
/// constraint (nonzero logical block for k >= 1, x != 0 for k = 0).
std::optional<std::size_t> decoded_weight(const StabilizerCode &code, const QuboProblem &q,
                                          std::span<const std::uint8_t> z);

}  // namespace qdist
