#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ktk {

/// Dense row vector over GF(2).
///
/// Coordinates are packed into 64-bit words, least-significant bit first, so
/// coordinate i lives in word i / 64 at bit i % 64. Bits past size() are kept
/// zero at all times; equality and weight rely on that.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t len);

  static BitVector from_support(std::size_t len, std::span<const std::size_t> support);
  /// Parses a string of '0'/'1' characters, coordinate 0 first.
  static BitVector from_string(std::string_view bits);

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
  void clear();

  std::size_t weight() const noexcept;
  bool is_zero() const noexcept;
  std::vector<std::size_t> support() const;
  /// Inner product over GF(2).
  bool dot(const BitVector& other) const;

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector& operator+=(const BitVector& other) { return *this ^= other; }
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
  friend BitVector operator+(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
  friend BitVector operator-(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
  friend BitVector operator&(BitVector lhs, const BitVector& rhs) { return lhs &= rhs; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  /// Coordinates [begin, end) as a new vector.
  BitVector slice(std::size_t begin, std::size_t end) const;
  /// Coordinates listed in `indices`, in that order.
  BitVector select(std::span<const std::size_t> indices) const;
  BitVector concat(const BitVector& tail) const;

  std::span<Word> words() noexcept { return words_; }
  std::span<const Word> words() const noexcept { return words_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  std::string to_string() const;

 private:
  void mask_tail() noexcept;

  std::size_t len_ = 0;
  std::vector<Word> words_;
};

/// Hex encoding of ceil(len/8) bytes, LSB-first within each byte.
std::string to_hex(const BitVector& v);
/// Inverse of to_hex; rejects wrong byte counts and nonzero padding bits.
BitVector from_hex(std::string_view hex, std::size_t len);

}  // namespace ktk
