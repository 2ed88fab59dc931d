#include "ktk/bit_vector.hpp"

#include <algorithm>
#include <bit>

#include "ktk/errors.hpp"

namespace ktk {

namespace {

std::size_t words_for(std::size_t len) { return (len + BitVector::kWordBits - 1) / BitVector::kWordBits; }

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

BitVector BitVector::from_support(std::size_t len, std::span<const std::size_t> support) {
  BitVector v(len);
  for (std::size_t i : support) {
    if (i >= len) throw DomainError("support index out of range");
    v.set(i);
  }
  return v;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw DomainError("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

void BitVector::set(std::size_t i, bool value) {
  const Word mask = Word{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

void BitVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVector::weight() const noexcept {
  std::size_t w = 0;
  for (Word x : words_) w += static_cast<std::size_t>(std::popcount(x));
  return w;
}

bool BitVector::is_zero() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](Word x) { return x == 0; });
}

std::vector<std::size_t> BitVector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    Word x = words_[w];
    while (x != 0) {
      out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

bool BitVector::dot(const BitVector& other) const {
  if (other.len_ != len_) throw DomainError("dot: length mismatch");
  Word acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return (std::popcount(acc) & 1) != 0;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.len_ != len_) throw DomainError("xor: length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  if (other.len_ != len_) throw DomainError("and: length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

BitVector BitVector::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > len_) throw DomainError("slice out of range");
  BitVector out(end - begin);
  const std::size_t shift = begin % kWordBits;
  const std::size_t first = begin / kWordBits;
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    Word lo = words_[first + w] >> shift;
    if (shift != 0 && first + w + 1 < words_.size()) {
      lo |= words_[first + w + 1] << (kWordBits - shift);
    }
    out.words_[w] = lo;
  }
  out.mask_tail();
  return out;
}

BitVector BitVector::select(std::span<const std::size_t> indices) const {
  BitVector out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (get(indices[i])) out.set(i);
  }
  return out;
}

BitVector BitVector::concat(const BitVector& tail) const {
  BitVector out(len_ + tail.len_);
  std::copy(words_.begin(), words_.end(), out.words_.begin());
  for (std::size_t i : tail.support()) out.set(len_ + i);
  return out;
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i : support()) s[i] = '1';
  return s;
}

void BitVector::mask_tail() noexcept {
  const std::size_t rem = len_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (Word{1} << rem) - 1;
}

std::string to_hex(const BitVector& v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nbytes = (v.size() + 7) / 8;
  std::string out;
  out.reserve(2 * nbytes);
  for (std::size_t b = 0; b < nbytes; ++b) {
    unsigned byte = 0;
    for (std::size_t bit = 0; bit < 8 && 8 * b + bit < v.size(); ++bit) {
      if (v.get(8 * b + bit)) byte |= 1U << bit;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

BitVector from_hex(std::string_view hex, std::size_t len) {
  const std::size_t nbytes = (len + 7) / 8;
  if (hex.size() != 2 * nbytes) {
    throw FormatError("expected " + std::to_string(2 * nbytes) + " hex digits, got " +
                      std::to_string(hex.size()));
  }
  BitVector v(len);
  for (std::size_t b = 0; b < nbytes; ++b) {
    const int hi = hex_digit(hex[2 * b]);
    const int lo = hex_digit(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw FormatError("invalid hex digit");
    const unsigned byte = static_cast<unsigned>(hi * 16 + lo);
    for (std::size_t bit = 0; bit < 8; ++bit) {
      if (((byte >> bit) & 1U) == 0) continue;
      if (8 * b + bit >= len) throw FormatError("nonzero padding bits in hex message");
      v.set(8 * b + bit);
    }
  }
  return v;
}

}  // namespace ktk
