#include "ktk/rng.hpp"

#include <numeric>

#include "ktk/errors.hpp"

namespace ktk {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ fnv1a64(label));
  s = splitmix64(s ^ index);
  engine_.seed(s);
}

std::uint64_t RandomStream::uniform(std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform: bound must be positive");
  // Reject the low (2^64 mod bound) outputs so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::size_t> RandomStream::sample_indices(std::size_t n, std::size_t count) {
  if (count > n) throw DomainError("sample_indices: count exceeds population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + uniform(n - i)]);
  }
  pool.resize(count);
  return pool;
}

BitVector RandomStream::weight_vector(std::size_t n, std::size_t w) {
  const auto idx = sample_indices(n, w);
  return BitVector::from_support(n, idx);
}

BitVector RandomStream::vector(std::size_t n) {
  BitVector v(n);
  auto words = v.words();
  for (auto& w : words) w = engine_();
  if (const std::size_t rem = n % BitVector::kWordBits; rem != 0) {
    words.back() &= (BitVector::Word{1} << rem) - 1;
  }
  return v;
}

}  // namespace ktk
