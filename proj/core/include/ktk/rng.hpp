#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "ktk/bit_vector.hpp"

namespace ktk {

/// Deterministic random stream keyed by (master seed, label, index).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Its seed is derived as
///   s = splitmix64(seed); s = splitmix64(s ^ fnv1a64(label)); s = splitmix64(s ^ index)
/// and bounded integers use rejection sampling on raw 64-bit outputs rather than
/// std::uniform_int_distribution, whose algorithm is implementation-defined.
/// Identical keys therefore give identical bits on every platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);
  bool bit() { return (engine_() >> 63) != 0; }

  /// `count` distinct indices from [0, n), in sampling order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count);
  /// Uniform vector of length n and weight exactly w.
  BitVector weight_vector(std::size_t n, std::size_t w);
  BitVector vector(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace ktk
