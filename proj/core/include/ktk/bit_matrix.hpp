#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ktk/bit_vector.hpp"

namespace ktk {

class RandomStream;

/// Dense GF(2) matrix, row-major, each row a packed BitVector.
///
/// All products follow the row-vector convention: v * A and A * B combine
/// rows of the right operand selected by the set bits of the left operand.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  explicit BitMatrix(std::vector<BitVector> rows);
  /// Convenience for tests: nested 0/1 literals.
  BitMatrix(std::initializer_list<std::initializer_list<int>> rows);

  static BitMatrix identity(std::size_t n);
  static BitMatrix random(std::size_t rows, std::size_t cols, RandomStream& rng);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  const BitVector& row(std::size_t i) const { return rows_[i]; }
  BitVector& row(std::size_t i) { return rows_[i]; }
  std::span<const BitVector> row_span() const noexcept { return rows_; }

  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool value = true) { rows_[i].set(j, value); }
  void flip(std::size_t i, std::size_t j) { rows_[i].flip(j); }

  BitVector column(std::size_t j) const;
  BitMatrix transpose() const;
  /// Columns [begin, end).
  BitMatrix column_slice(std::size_t begin, std::size_t end) const;
  BitMatrix hconcat(const BitMatrix& right) const;
  BitMatrix vconcat(const BitMatrix& below) const;

  bool is_zero() const noexcept;

  BitMatrix& operator^=(const BitMatrix& other);
  BitMatrix& operator+=(const BitMatrix& other) { return *this ^= other; }
  friend BitMatrix operator+(BitMatrix lhs, const BitMatrix& rhs) { return lhs ^= rhs; }
  friend BitMatrix operator-(BitMatrix lhs, const BitMatrix& rhs) { return lhs ^= rhs; }
  friend BitMatrix operator*(const BitMatrix& lhs, const BitMatrix& rhs);
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// Row vector times matrix: XOR of the rows of `m` selected by `v`.
BitVector operator*(const BitVector& v, const BitMatrix& m);

std::size_t rank(const BitMatrix& m);

/// Throws SingularError when `m` is not invertible.
BitMatrix inverse(const BitMatrix& m);

/// One x with x * a == s; free variables are zero. Throws NoSolution.
BitVector solve_left(const BitMatrix& a, const BitVector& s);

struct ColumnEchelon {
  BitMatrix reduced;    ///< a * transform, nonzero columns first
  BitMatrix transform;  ///< cols x cols, invertible
  std::size_t rank = 0;
};

/// Column reduction: reduced = a * transform, with the first `rank` columns in
/// reduced column-echelon form and all other columns zero.
ColumnEchelon rref_with_transform(const BitMatrix& a);

/// Row-reduced echelon form together with the pivot column of each row.
struct RowEchelon {
  BitMatrix reduced;
  std::vector<std::size_t> pivots;
};
RowEchelon row_echelon(const BitMatrix& a);

/// Uniform nonsingular n x n matrix by rejection sampling.
BitMatrix random_nonsingular(std::size_t n, RandomStream& rng);

}  // namespace ktk
