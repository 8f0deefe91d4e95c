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

#include "qdist/codes.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "qdist/errors.hpp"

namespace qdist {

namespace {

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
    line.remove_prefix(1);
  }
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
    line.remove_suffix(1);
  }
  return line;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    ++number;
    auto nl = text.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    auto stripped = strip_comment(text.substr(pos, end - pos));
    if (!stripped.empty()) {
      out.push_back({number, stripped});
    }
    if (nl == std::string_view::npos) {
      break;
    }
    pos = nl + 1;
  }
  return out;
}

BitVector parse_bits(const Line &line, std::size_t expected) {
  BitVector bits;
  for (char ch : line.text) {
    if (ch == '0' || ch == '1') {
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ',') {
      throw ParseError(line.number, std::string("unexpected character '") + ch + "' in bit row");
    }
  }
  if (bits.size() != expected) {
    throw ParseError(line.number,
                     "expected " + std::to_string(expected) + " bits, found " + std::to_string(bits.size()));
  }
  return bits;
}

std::size_t parse_count(const Line &line, std::string_view token) {
  std::size_t value = 0;
  if (token.empty()) {
    throw ParseError(line.number, "missing size");
  }
  for (char ch : token) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ParseError(line.number, "expected a non-negative integer, found '" + std::string(token) + "'");
    }
    value = value * 10 + static_cast<std::size_t>(ch - '0');
  }
  return value;
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > start) {
      words.push_back(text.substr(start, i - start));
    }
  }
  return words;
}

bool is_count(std::string_view word) {
  if (word.empty()) {
    return false;
  }
  for (char ch : word) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      return false;
    }
  }
  return true;
}

// H Lambda: swaps the X and Z halves of every row.
BitMatrix symplectic_dual(const BitMatrix &h, std::size_t n) {
  BitMatrix out(h.rows(), 2 * n);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t q = 0; q < n; ++q) {
      out.set(r, q, h.get(r, n + q));
      out.set(r, n + q, h.get(r, q));
    }
  }
  return out;
}

void check_commutation(const BitMatrix &h) {
  for (std::size_t a = 0; a < h.rows(); ++a) {
    BitVector ra = h.row(a);
    for (std::size_t b = a + 1; b < h.rows(); ++b) {
      if (symplectic_product(ra, h.row(b)) != 0) {
        throw InputError("generators " + std::to_string(a) + " and " + std::to_string(b) + " anticommute");
      }
    }
  }
}

}  // namespace

bool GraphCode::has_self_loops() const {
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency.get(i, i)) {
      return true;
    }
  }
  return false;
}

int symplectic_product(std::span<const std::uint8_t> c1, std::span<const std::uint8_t> c2) {
  if (c1.size() != c2.size() || c1.size() % 2 != 0) {
    throw std::invalid_argument("symplectic_product: vectors must have equal even length");
  }
  std::size_t n = c1.size() / 2;
  int acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc ^= (c1[i] & c2[n + i]) ^ (c1[n + i] & c2[i]);
  }
  return acc & 1;
}

BitMatrix parse_pauli_generators(std::string_view text) {
  std::vector<BitVector> rows;
  std::size_t n = 0;
  for (const Line &line : content_lines(text)) {
    std::string_view s = line.text;
    if (rows.empty()) {
      n = s.size();
    } else if (s.size() != n) {
      throw ParseError(line.number, "generator has length " + std::to_string(s.size()) + ", expected " +
                                        std::to_string(n));
    }
    BitVector row(2 * n, 0);
    for (std::size_t q = 0; q < n; ++q) {
      switch (s[q]) {
        case 'I':
          break;
        case 'X':
          row[q] = 1;
          break;
        case 'Z':
          row[n + q] = 1;
          break;
        case 'Y':
          row[q] = 1;
          row[n + q] = 1;
          break;
        default:
          throw ParseError(line.number, std::string("illegal Pauli character '") + s[q] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return BitMatrix::from_rows(rows, 2 * n);
}

std::string to_pauli_string(std::span<const std::uint8_t> c) {
  std::size_t n = c.size() / 2;
  std::string out(n, 'I');
  for (std::size_t q = 0; q < n; ++q) {
    bool x = c[q] & 1;
    bool z = c[n + q] & 1;
    out[q] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return out;
}

StabilizerCode validate_stabilizer(const BitMatrix &h, std::size_t n, std::size_t k) {
  if (k > n) {
    throw InputError("k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  }
  if (h.rows() != n - k || h.cols() != 2 * n) {
    throw InputError("stabilizer matrix is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                     ", expected " + std::to_string(n - k) + "x" + std::to_string(2 * n));
  }
  check_commutation(h);
  std::size_t r = rank(h);
  if (r != n - k) {
    throw InputError("stabilizer matrix has rank " + std::to_string(r) + ", expected " + std::to_string(n - k));
  }
  StabilizerCode code;
  code.n_ = n;
  code.k_ = k;
  code.h_ = h;
  code.g_ = normalizer_from_parity(h, n, k);
  return code;
}

BitMatrix normalizer_from_parity(const BitMatrix &h, std::size_t n, std::size_t k) {
  BitMatrix kernel = kernel_basis(symplectic_dual(h, n));
  // Independent set, kept as rows so rank checks are row eliminations.
  BitMatrix chosen = h;
  std::size_t chosen_rank = rank(chosen);
  std::vector<BitVector> logicals;
  for (std::size_t c = 0; c < kernel.cols() && logicals.size() < 2 * k; ++c) {
    BitVector candidate = kernel.column(c);
    BitMatrix extended = BitMatrix::vstack(chosen, BitMatrix::from_rows(std::span(&candidate, 1), 2 * n));
    std::size_t r = rank(extended);
    if (r > chosen_rank) {
      chosen = std::move(extended);
      chosen_rank = r;
      logicals.push_back(std::move(candidate));
    }
  }
  if (logicals.size() != 2 * k) {
    throw InvariantError("normalizer completion found " + std::to_string(logicals.size()) +
                         " logical operators, expected " + std::to_string(2 * k));
  }
  BitMatrix l = logicals.empty() ? BitMatrix(2 * n, 0) : BitMatrix::from_columns(logicals, 2 * n);
  return BitMatrix::hstack(l, h.transpose());
}

std::size_t pauli_weight(std::span<const std::uint8_t> c) {
  if (c.size() % 2 != 0) {
    throw std::invalid_argument("pauli_weight: vector length " + std::to_string(c.size()) + " is odd");
  }
  std::size_t n = c.size() / 2;
  std::size_t aa = 0, bb = 0, ab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    aa += c[i] & 1;
    bb += c[n + i] & 1;
    ab += c[i] & c[n + i] & 1;
  }
  return aa + bb - ab;
}

std::size_t weight_of_element(const StabilizerCode &code, std::span<const std::uint8_t> x) {
  return pauli_weight(matvec_mod2(code.normalizer(), x));
}

GraphCode make_graph_code(const BitMatrix &adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw InputError("graph adjacency must be square");
  }
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    for (std::size_t j = i + 1; j < adjacency.cols(); ++j) {
      if (adjacency.get(i, j) != adjacency.get(j, i)) {
        throw InputError("graph adjacency is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                         ")");
      }
    }
  }
  return GraphCode{adjacency.rows(), adjacency};
}

StabilizerCode graph_stabilizer_code(const GraphCode &graph) {
  return validate_stabilizer(BitMatrix::hstack(BitMatrix::identity(graph.n), graph.adjacency), graph.n, 0);
}

GraphCode circulant_to_graph(const CirculantCode &circulant) {
  std::size_t n = circulant.n;
  if (circulant.first_row.size() != n) {
    throw InputError("circulant first row has length " + std::to_string(circulant.first_row.size()) +
                     ", expected " + std::to_string(n));
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (circulant.first_row[j] != circulant.first_row[n - j]) {
      throw InputError("circulant first row is not symmetric: row[" + std::to_string(j) + "] != row[" +
                       std::to_string(n - j) + "]");
    }
  }
  BitMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b.set(i, j, circulant.first_row[(j + n - i) % n] & 1);
    }
  }
  return GraphCode{n, std::move(b)};
}

std::vector<CirculantCode> symmetric_circulants(std::size_t n, bool allow_self_loops) {
  std::vector<CirculantCode> out;
  if (n == 0) {
    return out;
  }
  // Free positions are 0..n/2; the rest mirror them.
  std::size_t half = n / 2;
  std::size_t first = allow_self_loops ? 0 : 1;
  std::size_t free_count = half + 1 - first;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_count); ++mask) {
    BitVector row(n, 0);
    for (std::size_t p = 0; p < free_count; ++p) {
      std::size_t j = first + p;
      // Most significant free bit is the lowest position.
      std::uint8_t bit = (mask >> (free_count - 1 - p)) & 1;
      row[j] = bit;
      row[(n - j) % n] = bit;
    }
    out.push_back(CirculantCode{n, std::move(row)});
  }
  return out;
}

CodeFile code_from_graph(GraphCode graph, std::string id) {
  CodeFile file;
  file.id = std::move(id);
  file.code = graph_stabilizer_code(graph);
  if (graph.has_self_loops()) {
    file.warnings.push_back("adjacency has diagonal entries; the corresponding generators contain Y");
  }
  file.graph = std::move(graph);
  return file;
}

CodeFile code_from_circulant(CirculantCode circulant, std::string id) {
  CodeFile file = code_from_graph(circulant_to_graph(circulant), std::move(id));
  file.circulant = std::move(circulant);
  return file;
}

CodeFile parse_code_text(std::string_view text, std::string id) {
  std::vector<Line> lines = content_lines(text);
  if (lines.empty()) {
    throw ParseError(1, "empty code file");
  }
  std::vector<std::string_view> head = split_words(lines[0].text);

  if (head[0] == "graph" || head[0] == "circulant") {
    if (head.size() != 2) {
      throw ParseError(lines[0].number, "expected '" + std::string(head[0]) + " <n>'");
    }
    std::size_t n = parse_count(lines[0], head[1]);
    if (n == 0) {
      throw ParseError(lines[0].number, "code length must be positive");
    }
    if (head[0] == "circulant") {
      if (lines.size() != 2) {
        throw ParseError(lines.size() < 2 ? lines[0].number : lines[2].number,
                         "circulant format expects exactly one row after the header");
      }
      return code_from_circulant(CirculantCode{n, parse_bits(lines[1], n)}, std::move(id));
    }
    if (lines.size() != n + 1) {
      throw ParseError(lines.back().number, "graph format expects " + std::to_string(n) + " adjacency rows, found " +
                                                std::to_string(lines.size() - 1));
    }
    std::vector<BitVector> rows;
    for (std::size_t i = 1; i <= n; ++i) {
      rows.push_back(parse_bits(lines[i], n));
    }
    return code_from_graph(make_graph_code(BitMatrix::from_rows(rows, n)), std::move(id));
  }

  if (head.size() == 2 && is_count(head[0]) && is_count(head[1])) {
    std::size_t n = parse_count(lines[0], head[0]);
    std::size_t k = parse_count(lines[0], head[1]);
    if (n == 0 || k > n) {
      throw ParseError(lines[0].number, "invalid parameters n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
    if (lines.size() != n - k + 1) {
      throw ParseError(lines.back().number, "expected " + std::to_string(n - k) + " generator rows, found " +
                                                std::to_string(lines.size() - 1));
    }
    std::vector<BitVector> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      rows.push_back(parse_bits(lines[i], 2 * n));
    }
    CodeFile file;
    file.id = std::move(id);
    file.code = validate_stabilizer(BitMatrix::from_rows(rows, 2 * n), n, k);
    return file;
  }

  BitMatrix h = parse_pauli_generators(text);
  std::size_t n = h.cols() / 2;
  check_commutation(h);
  CodeFile file;
  file.id = std::move(id);
  std::vector<BitVector> independent;
  std::size_t current_rank = 0;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    independent.push_back(h.row(r));
    std::size_t next = rank(BitMatrix::from_rows(independent, 2 * n));
    if (next == current_rank) {
      independent.pop_back();
      file.warnings.push_back("generator " + std::to_string(r) + " is dependent on earlier generators; dropped");
    } else {
      current_rank = next;
    }
  }
  BitMatrix reduced = BitMatrix::from_rows(independent, 2 * n);
  file.code = validate_stabilizer(reduced, n, n - reduced.rows());
  return file;
}

CodeFile load_code_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open code file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string id = path;
  auto slash = id.find_last_of('/');
  if (slash != std::string::npos) {
    id = id.substr(slash + 1);
  }
  auto dot = id.find_last_of('.');
  if (dot != std::string::npos && dot > 0) {
    id = id.substr(0, dot);
  }
  return parse_code_text(buffer.str(), id);
}

}  // namespace qdist
