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

#include "qdist/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace qdist {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_(words_for(cols)), data_(rows * words_for(cols), 0) {}

BitMatrix::BitMatrix(std::initializer_list<std::initializer_list<int>> rows) {
  std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  *this = BitMatrix(rows.size(), cols);
  std::size_t r = 0;
  for (const auto &row : rows) {
    if (row.size() != cols) {
      throw std::invalid_argument("BitMatrix: ragged initializer");
    }
    std::size_t c = 0;
    for (int v : row) {
      set(r, c++, (v & 1) != 0);
    }
    ++r;
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, true);
  }
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows, std::size_t cols) {
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw std::invalid_argument("BitMatrix::from_rows: row " + std::to_string(r) + " has length " +
                                  std::to_string(rows[r].size()) + ", expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m.set(r, c, rows[r][c] & 1);
    }
  }
  return m;
}

BitMatrix BitMatrix::from_columns(std::span<const BitVector> columns, std::size_t rows) {
  return from_rows(columns, rows).transpose();
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  std::uint64_t &w = data_[r * words_ + c / 64];
  std::uint64_t bit = std::uint64_t{1} << (c % 64);
  w = value ? (w | bit) : (w & ~bit);
}

BitVector BitMatrix::row(std::size_t r) const {
  BitVector out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) {
    out[c] = get(r, c);
  }
  return out;
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r] = get(r, c);
  }
  return out;
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
  std::size_t w = 0;
  for (std::uint64_t word : row_words(r)) {
    w += static_cast<std::size_t>(std::popcount(word));
  }
  return w;
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
  const std::uint64_t *s = data_.data() + src * words_;
  std::uint64_t *d = data_.data() + dst * words_;
  for (std::size_t w = 0; w < words_; ++w) {
    d[w] ^= s[w];
  }
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) {
    return;
  }
  for (std::size_t w = 0; w < words_; ++w) {
    std::swap(data_[a * words_ + w], data_[b * words_ + w]);
  }
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) {
        t.set(c, r, true);
      }
    }
  }
  return t;
}

BitMatrix BitMatrix::multiply(const BitMatrix &rhs) const {
  if (cols_ != rhs.rows_) {
    throw std::invalid_argument("BitMatrix::multiply: inner dimensions " + std::to_string(cols_) + " and " +
                                std::to_string(rhs.rows_) + " differ");
  }
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t *dst = out.data_.data() + r * out.words_;
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!get(r, k)) {
        continue;
      }
      const std::uint64_t *src = rhs.data_.data() + k * rhs.words_;
      for (std::size_t w = 0; w < out.words_; ++w) {
        dst[w] ^= src[w];
      }
    }
  }
  return out;
}

BitMatrix BitMatrix::column_block(std::size_t begin, std::size_t count) const {
  if (begin + count > cols_) {
    throw std::invalid_argument("BitMatrix::column_block: range out of bounds");
  }
  BitMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < count; ++c) {
      if (get(r, begin + c)) {
        out.set(r, c, true);
      }
    }
  }
  return out;
}

BitMatrix BitMatrix::row_block(std::size_t begin, std::size_t count) const {
  if (begin + count > rows_) {
    throw std::invalid_argument("BitMatrix::row_block: range out of bounds");
  }
  BitMatrix out(count, cols_);
  std::copy(data_.begin() + static_cast<std::ptrdiff_t>(begin * words_),
            data_.begin() + static_cast<std::ptrdiff_t>((begin + count) * words_), out.data_.begin());
  return out;
}

BitMatrix BitMatrix::hstack(const BitMatrix &left, const BitMatrix &right) {
  if (left.rows_ != right.rows_) {
    throw std::invalid_argument("BitMatrix::hstack: row counts differ");
  }
  BitMatrix out(left.rows_, left.cols_ + right.cols_);
  for (std::size_t r = 0; r < left.rows_; ++r) {
    for (std::size_t c = 0; c < left.cols_; ++c) {
      if (left.get(r, c)) {
        out.set(r, c, true);
      }
    }
    for (std::size_t c = 0; c < right.cols_; ++c) {
      if (right.get(r, c)) {
        out.set(r, left.cols_ + c, true);
      }
    }
  }
  return out;
}

BitMatrix BitMatrix::vstack(const BitMatrix &top, const BitMatrix &bottom) {
  if (top.cols_ != bottom.cols_) {
    throw std::invalid_argument("BitMatrix::vstack: column counts differ");
  }
  BitMatrix out(top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.data_.begin(), top.data_.end(), out.data_.begin());
  std::copy(bottom.data_.begin(), bottom.data_.end(),
            out.data_.begin() + static_cast<std::ptrdiff_t>(top.data_.size()));
  return out;
}

bool BitMatrix::is_zero() const {
  for (std::uint64_t w : data_) {
    if (w != 0) {
      return false;
    }
  }
  return true;
}

BitVector matvec_mod2(const BitMatrix &m, std::span<const std::uint8_t> x) {
  if (x.size() != m.cols()) {
    throw std::invalid_argument("matvec_mod2: vector length " + std::to_string(x.size()) +
                                " does not match matrix columns " + std::to_string(m.cols()));
  }
  std::vector<std::uint64_t> packed((x.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] & 1) {
      packed[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
  BitVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row_words(r);
    int parity = 0;
    for (std::size_t w = 0; w < row.size(); ++w) {
      parity ^= std::popcount(row[w] & packed[w]) & 1;
    }
    out[r] = static_cast<std::uint8_t>(parity);
  }
  return out;
}

RrefResult rref(const BitMatrix &m) {
  RrefResult result{m, {}};
  BitMatrix &a = result.reduced;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
    std::size_t found = pivot_row;
    while (found < a.rows() && !a.get(found, col)) {
      ++found;
    }
    if (found == a.rows()) {
      continue;
    }
    a.swap_rows(found, pivot_row);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r != pivot_row && a.get(r, col)) {
        a.xor_row_into(pivot_row, r);
      }
    }
    result.pivots.push_back(col);
    ++pivot_row;
  }
  return result;
}

std::size_t rank(const BitMatrix &m) { return rref(m).pivots.size(); }

BitMatrix kernel_basis(const BitMatrix &m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : r.pivots) {
    is_pivot[p] = true;
  }
  std::vector<BitVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) {
      continue;
    }
    BitVector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
      if (r.reduced.get(i, free)) {
        v[r.pivots[i]] = 1;
      }
    }
    basis.push_back(std::move(v));
  }
  if (basis.empty()) {
    return BitMatrix(m.cols(), 0);
  }
  return BitMatrix::from_columns(basis, m.cols());
}

bool in_image(const BitMatrix &m, std::span<const std::uint8_t> c) {
  if (c.size() != m.rows()) {
    throw std::invalid_argument("in_image: vector length " + std::to_string(c.size()) +
                                " does not match matrix rows " + std::to_string(m.rows()));
  }
  BitMatrix augmented(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t col = 0; col < m.cols(); ++col) {
      if (m.get(r, col)) {
        augmented.set(r, col, true);
      }
    }
    if (c[r] & 1) {
      augmented.set(r, m.cols(), true);
    }
  }
  RrefResult reduced = rref(augmented);
  return reduced.pivots.empty() || reduced.pivots.back() != m.cols();
}

}  // namespace qdist
