#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ktk/bit_matrix.hpp"

namespace ktk {

class RandomStream;

/// Permutation of {0, ..., n-1}, image[i] = sigma(i).
///
/// Its matrix has a 1 at (i, image[i]), so for a row vector x the product
/// x * matrix moves coordinate i to image[i] and
/// support(x * matrix) = sigma(support(x)).
class Permutation {
 public:
  Permutation() = default;
  /// Validates that `image` is a bijection; throws DomainError otherwise.
  explicit Permutation(std::vector<std::uint32_t> image);

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, RandomStream& rng);
  /// Throws DomainError unless `m` has exactly one 1 per row and column.
  static Permutation from_matrix(const BitMatrix& m);

  std::size_t size() const noexcept { return image_.size(); }
  std::uint32_t operator()(std::size_t i) const { return image_[i]; }
  std::span<const std::uint32_t> image() const noexcept { return image_; }

  BitMatrix as_matrix() const;
  Permutation inverse() const;
  /// x * as_matrix() without materialising the matrix.
  BitVector apply(const BitVector& x) const;

  /// Matrix-product order: (a * b).as_matrix() == a.as_matrix() * b.as_matrix().
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> image_;
};

/// Diagonal 0/1 matrix D with ones at the listed indices; r(D) = ones().size().
class DiagonalSelector {
 public:
  DiagonalSelector() = default;
  DiagonalSelector(std::size_t n, std::vector<std::size_t> ones);

  static DiagonalSelector random(std::size_t n, std::size_t r, RandomStream& rng);

  std::size_t size() const noexcept { return n_; }
  std::size_t r() const noexcept { return ones_.size(); }
  std::span<const std::size_t> ones() const noexcept { return ones_; }

  BitMatrix as_matrix() const;
  /// m * D: keeps the selected columns of m and zeroes the rest.
  BitMatrix mask_columns(const BitMatrix& m) const;

  friend bool operator==(const DiagonalSelector&, const DiagonalSelector&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> ones_;  // sorted, distinct
};

}  // namespace ktk
