#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ktk/bit_matrix.hpp"

namespace ktk {

class RandomStream;

/// Binary linear [n, k, d] code with generator G and parity check H.
struct LinearCode {
  BitMatrix G;  ///< k x n
  BitMatrix H;  ///< (n - k) x n
  std::size_t d = 0;

  std::size_t n() const noexcept { return G.cols(); }
  std::size_t k() const noexcept { return G.rows(); }
};

/// Enumeration limit for the brute-force oracles (2^k codewords).
inline constexpr std::size_t kMaxBruteForceDimension = 24;

/// Deterministic parity check built from the RREF of G, one row per non-pivot
/// column in index order. Throws RankDeficient if G is not full row rank.
BitMatrix parity_check_from_generator(const BitMatrix& G);

struct MinDistance {
  std::size_t distance = 0;
  BitVector witness;  ///< a codeword of weight `distance`
};

/// Exact minimum distance by Gray-code enumeration of all 2^k - 1 nonzero
/// messages. Throws BudgetExceeded for k > 24.
MinDistance min_distance_bruteforce(const BitMatrix& G);
std::size_t min_distance_bruteforce(const LinearCode& code);

/// Wraps G with its parity check and brute-forced exact distance.
LinearCode make_code(BitMatrix G);

/// Lengths up to this use exact conditional row sampling (a 2^n-bit table).
inline constexpr std::size_t kExactSamplingMaxLength = 22;

/// Random code with distance >= d_target, built one generator row at a time:
/// each row is uniform among the vectors whose coset over the rows so far has
/// no word lighter than d_target. For n <= 22 the admissible rows are tracked
/// exactly and a dead end restarts the matrix (one rejection per restart); for
/// longer codes candidate rows are drawn at random (one rejection per refused
/// row). `d` is the exact brute-forced distance. Throws BudgetExceeded after
/// max_rejections.
LinearCode sample_code_with_distance(std::size_t n, std::size_t k, std::size_t d_target, RandomStream& rng,
                                     std::size_t max_rejections = 100000);

/// Cyclic code of length n from generator polynomial coefficients
/// (coefficient of x^i at index i); rows are the k = n - deg(g) shifts of g.
LinearCode cyclic_code(std::size_t n, const std::vector<int>& generator_poly);

/// Narrow-sense binary BCH code from a small built-in table, or nullopt.
/// Known (n, k): (7,4), (15,11), (15,7), (15,5), (31,21), (31,16).
std::optional<LinearCode> bch_code(std::size_t n, std::size_t k);

/// Random equivalent code: uniform column permutation and random change of basis.
LinearCode random_equivalent(const LinearCode& code, RandomStream& rng);

/// Decoder for a fixed code and erasure set.
class ErasureDecoder {
 public:
  virtual ~ErasureDecoder() = default;
  /// Returns the codeword agreeing with y outside the erasures except in at
  /// most t_max positions. Throws DecodeFailure if there is none.
  virtual BitVector decode(const BitVector& y, std::size_t t_max) const = 0;
};

/// Exhaustive errors-and-erasures decoder.
///
/// Erased coordinates are deleted (punctured); error patterns on the remaining
/// coordinates are tried by increasing weight, lexicographically within a
/// weight, against the syndrome of the punctured code. Unique whenever
/// 2 * t_max + |erasures| < d.
class BruteForceDecoder final : public ErasureDecoder {
 public:
  BruteForceDecoder(const LinearCode& code, std::vector<std::size_t> erasures);

  BitVector decode(const BitVector& y, std::size_t t_max) const override;

  std::span<const std::size_t> kept() const noexcept { return kept_; }

 private:
  BitMatrix G_;
  BitMatrix punctured_G_;
  BitMatrix punctured_Ht_;  // (n - rho) x (n - rho - k)
  std::vector<std::size_t> kept_;
};

BitVector decode_errors_erasures(const LinearCode& code, const BitVector& y,
                                 const std::vector<std::size_t>& erasures, std::size_t t_max);

/// Calls `visit(indices)` for every subset of {0..n-1} of size w in
/// lexicographic order; stops early when visit returns true. Returns whether
/// it stopped early.
template <typename Visit>
bool for_each_combination(std::size_t n, std::size_t w, Visit&& visit) {
  if (w > n) return false;
  std::vector<std::size_t> idx(w);
  for (std::size_t i = 0; i < w; ++i) idx[i] = i;
  for (;;) {
    if (visit(static_cast<const std::vector<std::size_t>&>(idx))) return true;
    std::size_t i = w;
    while (i > 0 && idx[i - 1] == n - w + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < w; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace ktk
