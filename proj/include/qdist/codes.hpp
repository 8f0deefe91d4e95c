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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdist/gf2.hpp"

namespace qdist {

/// Binary stabilizer code [[n, k]] in symplectic (alpha | beta) form.
///
/// `stabilizers()` is the (n-k) x 2n parity-check matrix H. `normalizer()` is
/// the 2n x (n+k) matrix G = (L | H^T): its first 2k columns are logical
/// operators, its last n-k columns are the rows of H. Phases are ignored.
class StabilizerCode {
 public:
  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  const BitMatrix &stabilizers() const { return h_; }
  const BitMatrix &normalizer() const { return g_; }

  /// X half of G (n x (n+k)), i.e. a = A x gives the alpha block of G x.
  BitMatrix x_block() const { return g_.row_block(0, n_); }
  /// Z half of G (n x (n+k)).
  BitMatrix z_block() const { return g_.row_block(n_, n_); }

 private:
  friend StabilizerCode validate_stabilizer(const BitMatrix &h, std::size_t n, std::size_t k);
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  BitMatrix h_;
  BitMatrix g_;
};

/// Self-dual graph code with normalizer G^T = (I | B).
struct GraphCode {
  std::size_t n = 0;
  BitMatrix adjacency;

  bool has_self_loops() const;
};

/// Graph code whose adjacency matrix is circulant, given by its first row.
struct CirculantCode {
  std::size_t n = 0;
  BitVector first_row;
};

/// Symplectic product of two 2n-vectors: alpha1.beta2 + beta1.alpha2 mod 2.
int symplectic_product(std::span<const std::uint8_t> c1, std::span<const std::uint8_t> c2);

/// Parses one generator per line over {I,X,Y,Z}. Blank lines and text after
/// '#' are ignored. Throws ParseError on ragged lengths or bad characters.
BitMatrix parse_pauli_generators(std::string_view text);

/// Pauli string for a 2n symplectic vector ("X", "Y", "Z", "I" per qubit).
std::string to_pauli_string(std::span<const std::uint8_t> c);

/// Checks commutation and rank and assembles the code, including G.
/// Throws InputError naming the first anticommuting row pair or the actual
/// rank.
StabilizerCode validate_stabilizer(const BitMatrix &h, std::size_t n, std::size_t k);

/// G = (L | H^T) spanning ker(H Lambda); L extends H^T greedily in the
/// pivot order of the kernel basis.
BitMatrix normalizer_from_parity(const BitMatrix &h, std::size_t n, std::size_t k);

/// alpha.alpha + beta.beta - alpha.beta for c = (alpha | beta).
std::size_t pauli_weight(std::span<const std::uint8_t> c);

/// Weight of G x.
std::size_t weight_of_element(const StabilizerCode &code, std::span<const std::uint8_t> x);

/// H = (I | B), checked for symmetry. Diagonal entries are allowed.
GraphCode make_graph_code(const BitMatrix &adjacency);

/// Builds the k = 0 stabilizer code of a graph code.
StabilizerCode graph_stabilizer_code(const GraphCode &graph);

/// B[i][j] = first_row[(j - i) mod n]. Throws InputError if the first row
/// is not palindromic (B would not be symmetric).
GraphCode circulant_to_graph(const CirculantCode &circulant);

/// All first rows of symmetric circulant codes of length n, in increasing
/// binary order of (row[0], row[1], ..., row[n/2]).
std::vector<CirculantCode> symmetric_circulants(std::size_t n, bool allow_self_loops);

/// A code read from a text file, with whatever structure the file declared.
struct CodeFile {
  std::string id;
  StabilizerCode code;
  std::optional<GraphCode> graph;
  std::optional<CirculantCode> circulant;
  std::vector<std::string> warnings;
};

/// Reads any of the supported code formats:
///   Pauli strings, one generator per line;
///   "n k" header followed by n-k rows of 2n bits;
///   "graph n" followed by n adjacency rows;
///   "circulant n" followed by the first row.
/// Pauli input with dependent generators keeps the first independent subset
/// and records a warning.
CodeFile parse_code_text(std::string_view text, std::string id = "code");
CodeFile load_code_file(const std::string &path);

CodeFile code_from_graph(GraphCode graph, std::string id);
CodeFile code_from_circulant(CirculantCode circulant, std::string id);

}  // namespace qdist
