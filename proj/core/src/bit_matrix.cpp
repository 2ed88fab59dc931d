#include "ktk/bit_matrix.hpp"

#include <bit>
#include <utility>

#include "ktk/errors.hpp"
#include "ktk/rng.hpp"

namespace ktk {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix::BitMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
  if (!rows_.empty()) cols_ = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != cols_) throw DomainError("ragged matrix rows");
  }
}

BitMatrix::BitMatrix(std::initializer_list<std::initializer_list<int>> rows) {
  for (const auto& r : rows) {
    BitVector v(r.size());
    std::size_t j = 0;
    for (int x : r) v.set(j++, x != 0);
    rows_.push_back(std::move(v));
  }
  if (!rows_.empty()) cols_ = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != cols_) throw DomainError("ragged matrix rows");
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, RandomStream& rng) {
  std::vector<BitVector> out;
  out.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) out.push_back(rng.vector(cols));
  BitMatrix m(std::move(out));
  m.cols_ = cols;
  return m;
}

BitVector BitMatrix::column(std::size_t j) const {
  BitVector c(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rows_[i].get(j)) c.set(i);
  }
  return c;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j : rows_[i].support()) t.set(j, i);
  }
  return t;
}

BitMatrix BitMatrix::column_slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > cols_) throw DomainError("column slice out of range");
  BitMatrix out(rows(), end - begin);
  for (std::size_t i = 0; i < rows(); ++i) out.rows_[i] = rows_[i].slice(begin, end);
  return out;
}

BitMatrix BitMatrix::hconcat(const BitMatrix& right) const {
  if (right.rows() != rows()) throw DomainError("hconcat: row count mismatch");
  BitMatrix out(rows(), cols_ + right.cols_);
  for (std::size_t i = 0; i < rows(); ++i) out.rows_[i] = rows_[i].concat(right.rows_[i]);
  return out;
}

BitMatrix BitMatrix::vconcat(const BitMatrix& below) const {
  if (below.cols_ != cols_ && !below.rows_.empty() && !rows_.empty()) {
    throw DomainError("vconcat: column count mismatch");
  }
  BitMatrix out = *this;
  if (rows_.empty()) out.cols_ = below.cols_;
  out.rows_.insert(out.rows_.end(), below.rows_.begin(), below.rows_.end());
  return out;
}

bool BitMatrix::is_zero() const noexcept {
  for (const auto& r : rows_) {
    if (!r.is_zero()) return false;
  }
  return true;
}

BitMatrix& BitMatrix::operator^=(const BitMatrix& other) {
  if (other.rows() != rows() || other.cols_ != cols_) throw DomainError("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < rows(); ++i) rows_[i] ^= other.rows_[i];
  return *this;
}

BitMatrix operator*(const BitMatrix& lhs, const BitMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DomainError("matrix product: inner dimension mismatch");
  BitMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) out.rows_[i] = lhs.rows_[i] * rhs;
  return out;
}

BitVector operator*(const BitVector& v, const BitMatrix& m) {
  if (v.size() != m.rows()) throw DomainError("vector-matrix product: dimension mismatch");
  BitVector out(m.cols());
  auto acc = out.words();
  const auto words = v.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    BitVector::Word x = words[w];
    while (x != 0) {
      const std::size_t j = w * BitVector::kWordBits + static_cast<std::size_t>(std::countr_zero(x));
      const auto src = m.row(j).words();
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] ^= src[k];
      x &= x - 1;
    }
  }
  return out;
}

namespace {

// In-place Gauss-Jordan; pivots are searched only among columns < pivot_limit.
std::vector<std::size_t> reduce(BitMatrix& m, std::size_t pivot_limit) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_limit && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    if (p != r) std::swap(m.row(p), m.row(r));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i != r && m.get(i, c)) m.row(i) ^= m.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RowEchelon row_echelon(const BitMatrix& a) {
  RowEchelon out{a, {}};
  out.pivots = reduce(out.reduced, a.cols());
  return out;
}

std::size_t rank(const BitMatrix& m) {
  BitMatrix work = m;
  return reduce(work, m.cols()).size();
}

BitMatrix inverse(const BitMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("inverse: matrix not square");
  const std::size_t n = m.rows();
  BitMatrix aug = m.hconcat(BitMatrix::identity(n));
  if (reduce(aug, n).size() != n) throw SingularError();
  return aug.column_slice(n, 2 * n);
}

BitVector solve_left(const BitMatrix& a, const BitVector& s) {
  if (s.size() != a.cols()) throw DomainError("solve_left: length mismatch");
  const std::size_t unknowns = a.rows();
  BitMatrix rhs(a.cols(), 1);
  for (std::size_t j : s.support()) rhs.set(j, 0);
  BitMatrix aug = a.transpose().hconcat(rhs);
  const auto pivots = reduce(aug, unknowns);
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i) {
    if (aug.get(i, unknowns)) throw NoSolution();
  }
  BitVector x(unknowns);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (aug.get(i, unknowns)) x.set(pivots[i]);
  }
  return x;
}

ColumnEchelon rref_with_transform(const BitMatrix& a) {
  const std::size_t n = a.cols();
  BitMatrix aug = a.transpose().hconcat(BitMatrix::identity(n));
  const auto pivots = reduce(aug, a.rows());
  return ColumnEchelon{aug.column_slice(0, a.rows()).transpose(),
                       aug.column_slice(a.rows(), a.rows() + n).transpose(), pivots.size()};
}

BitMatrix random_nonsingular(std::size_t n, RandomStream& rng) {
  if (n == 0) throw DomainError("random_nonsingular: n must be positive");
  for (;;) {
    BitMatrix m = BitMatrix::random(n, n, rng);
    if (rank(m) == n) return m;
  }
}

}  // namespace ktk
