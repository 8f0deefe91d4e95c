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
#include <initializer_list>
#include <span>
#include <vector>

namespace qdist {

/// Unpacked binary vector, one entry (0 or 1) per element.
using BitVector = std::vector<std::uint8_t>;

/// Dense GF(2) matrix with row-major, word-packed rows.
///
/// Bits past `cols()` in the last word of every row are kept zero so that
/// whole-word comparisons and popcounts are exact.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  BitMatrix(std::initializer_list<std::initializer_list<int>> rows);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::span<const BitVector> rows, std::size_t cols);
  static BitMatrix from_columns(std::span<const BitVector> columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return words_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool value);
  void flip(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {data_.data() + r * words_, words_};
  }
  std::span<std::uint64_t> row_words(std::size_t r) { return {data_.data() + r * words_, words_}; }

  BitVector row(std::size_t r) const;
  BitVector column(std::size_t c) const;
  std::size_t row_weight(std::size_t r) const;

  /// row[dst] ^= row[src]
  void xor_row_into(std::size_t src, std::size_t dst);
  void swap_rows(std::size_t a, std::size_t b);

  BitMatrix transpose() const;
  BitMatrix multiply(const BitMatrix &rhs) const;
  BitMatrix column_block(std::size_t begin, std::size_t count) const;
  BitMatrix row_block(std::size_t begin, std::size_t count) const;
  static BitMatrix hstack(const BitMatrix &left, const BitMatrix &right);
  static BitMatrix vstack(const BitMatrix &top, const BitMatrix &bottom);

  bool is_zero() const;
  bool operator==(const BitMatrix &other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// (M x) mod 2. Throws std::invalid_argument when x.size() != M.cols().
BitVector matvec_mod2(const BitMatrix &m, std::span<const std::uint8_t> x);

struct RrefResult {
  BitMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, in row order
};

/// Reduced row-echelon form. Pivots are taken as the first nonzero entry in
/// column order.
RrefResult rref(const BitMatrix &m);

std::size_t rank(const BitMatrix &m);

/// Basis of ker M, one basis vector per column of the result
/// (M.cols() x (M.cols() - rank M)).
BitMatrix kernel_basis(const BitMatrix &m);

/// True iff some x satisfies M x = c (mod 2).
bool in_image(const BitMatrix &m, std::span<const std::uint8_t> c);

}  // namespace qdist
