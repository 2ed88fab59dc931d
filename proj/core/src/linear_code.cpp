#include "ktk/linear_code.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <utility>

#include "ktk/errors.hpp"
#include "ktk/permutation.hpp"
#include "ktk/rng.hpp"

namespace ktk {

BitMatrix parity_check_from_generator(const BitMatrix& G) {
  const std::size_t n = G.cols();
  const auto ech = row_echelon(G);
  if (ech.pivots.size() != G.rows()) throw RankDeficient("generator matrix is not full row rank");

  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : ech.pivots) is_pivot[p] = true;

  BitMatrix H(n - G.rows(), n);
  std::size_t r = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    H.set(r, f);
    for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
      if (ech.reduced.get(i, f)) H.set(r, ech.pivots[i]);
    }
    ++r;
  }
  return H;
}

MinDistance min_distance_bruteforce(const BitMatrix& G) {
  const std::size_t k = G.rows();
  if (k > kMaxBruteForceDimension) throw BudgetExceeded("min_distance_bruteforce: k exceeds 24");
  if (k == 0) throw DomainError("min_distance_bruteforce: empty code");

  MinDistance best{G.cols() + 1, BitVector(G.cols())};
  BitVector c(G.cols());
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    // Gray code: step i flips message bit ctz(i).
    c ^= G.row(static_cast<std::size_t>(std::countr_zero(i)));
    const std::size_t w = c.weight();
    if (w < best.distance) {
      best.distance = w;
      best.witness = c;
    }
  }
  return best;
}

std::size_t min_distance_bruteforce(const LinearCode& code) { return min_distance_bruteforce(code.G).distance; }

LinearCode make_code(BitMatrix G) {
  BitMatrix H = parity_check_from_generator(G);
  const std::size_t d = min_distance_bruteforce(G).distance;
  return LinearCode{std::move(G), std::move(H), d};
}

namespace {

using Bitmap = std::vector<std::uint64_t>;

// out[v] = in[v ^ r] for a bitmap indexed by n-bit vectors (n >= 6).
Bitmap xor_shift(const Bitmap& in, std::uint64_t r) {
  static constexpr std::uint64_t kMasks[6] = {0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
                                              0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
  const std::uint64_t hi = r >> 6;
  const std::uint64_t lo = r & 63;
  Bitmap out(in.size());
  for (std::size_t w = 0; w < in.size(); ++w) {
    std::uint64_t x = in[w ^ hi];
    for (int b = 0; b < 6; ++b) {
      if ((lo >> b) & 1U) {
        const int shift = 1 << b;
        x = ((x & kMasks[b]) << shift) | ((x >> shift) & kMasks[b]);
      }
    }
    out[w] = x;
  }
  return out;
}

std::uint64_t pick_set_bit(const Bitmap& bm, std::uint64_t count, RandomStream& rng) {
  std::uint64_t target = rng.uniform(count);
  for (std::size_t w = 0; w < bm.size(); ++w) {
    const auto c = static_cast<std::uint64_t>(std::popcount(bm[w]));
    if (target >= c) {
      target -= c;
      continue;
    }
    std::uint64_t x = bm[w];
    for (; target > 0; --target) x &= x - 1;
    return w * 64 + static_cast<std::uint64_t>(std::countr_zero(x));
  }
  return 0;
}

BitVector vector_from_index(std::size_t n, std::uint64_t v) {
  BitVector out(n);
  out.words()[0] = v;
  return out;
}

// Exact conditional row sampling for small n: `valid` holds every vector that
// could still be added, i.e. whose coset over the current span stays heavy.
std::optional<BitMatrix> sample_rows_exact(std::size_t n, std::size_t k, std::size_t d_target, RandomStream& rng,
                                           std::size_t max_restarts, std::size_t& restarts) {
  Bitmap heavy(std::size_t{1} << (n - 6), 0);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    if (static_cast<std::size_t>(std::popcount(v)) >= d_target) heavy[v / 64] |= std::uint64_t{1} << (v % 64);
  }
  for (; restarts < max_restarts; ++restarts) {
    Bitmap valid = heavy;
    std::vector<BitVector> rows;
    while (rows.size() < k) {
      std::uint64_t count = 0;
      for (auto w : valid) count += static_cast<std::uint64_t>(std::popcount(w));
      if (count == 0) break;
      const std::uint64_t v = pick_set_bit(valid, count, rng);
      const Bitmap shifted = xor_shift(valid, v);
      for (std::size_t w = 0; w < valid.size(); ++w) valid[w] &= shifted[w];
      rows.push_back(vector_from_index(n, v));
    }
    if (rows.size() == k) return BitMatrix(std::move(rows));
  }
  return std::nullopt;
}

// Large n: draw uniform candidate rows and reject light cosets.
std::optional<BitMatrix> sample_rows_rejection(std::size_t n, std::size_t k, std::size_t d_target,
                                               RandomStream& rng, std::size_t max_rejections,
                                               std::size_t& rejections) {
  constexpr std::size_t kRowPatience = 4096;
  while (rejections < max_rejections) {
    std::vector<BitVector> rows;
    std::vector<BitVector> span{BitVector(n)};
    std::size_t misses = 0;
    while (rows.size() < k && misses < kRowPatience && rejections < max_rejections) {
      BitVector v = rng.vector(n);
      bool ok = true;
      for (const auto& c : span) {
        if ((v ^ c).weight() < d_target) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        ++misses;
        ++rejections;
        continue;
      }
      misses = 0;
      const std::size_t old_size = span.size();
      for (std::size_t i = 0; i < old_size; ++i) span.push_back(span[i] ^ v);
      rows.push_back(std::move(v));
    }
    if (rows.size() == k) return BitMatrix(std::move(rows));
  }
  return std::nullopt;
}

}  // namespace

LinearCode sample_code_with_distance(std::size_t n, std::size_t k, std::size_t d_target, RandomStream& rng,
                                     std::size_t max_rejections) {
  if (k == 0 || k >= n) throw DomainError("sample_code_with_distance: need 0 < k < n");
  if (k > kMaxBruteForceDimension) throw BudgetExceeded("sample_code_with_distance: k exceeds 24");
  std::size_t rejections = 0;
  const auto G = (n >= 6 && n <= kExactSamplingMaxLength)
                     ? sample_rows_exact(n, k, d_target, rng, max_rejections, rejections)
                     : sample_rows_rejection(n, k, d_target, rng, max_rejections, rejections);
  if (!G) {
    throw BudgetExceeded("no [" + std::to_string(n) + "," + std::to_string(k) + "] code with distance >= " +
                         std::to_string(d_target) + " after " + std::to_string(max_rejections) + " rejections");
  }
  return make_code(*G);
}

LinearCode cyclic_code(std::size_t n, const std::vector<int>& generator_poly) {
  std::size_t deg = generator_poly.size();
  while (deg > 0 && generator_poly[deg - 1] == 0) --deg;
  if (deg == 0) throw DomainError("cyclic_code: zero generator polynomial");
  --deg;
  if (deg >= n) throw DomainError("cyclic_code: generator degree must be below n");
  const std::size_t k = n - deg;
  BitMatrix G(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= deg; ++j) {
      if (generator_poly[j] != 0) G.set(i, i + j);
    }
  }
  return make_code(std::move(G));
}

std::optional<LinearCode> bch_code(std::size_t n, std::size_t k) {
  // Generator polynomials, lowest degree first.
  static const std::map<std::pair<std::size_t, std::size_t>, std::vector<int>> kTable = {
      {{7, 4}, {1, 1, 0, 1}},
      {{15, 11}, {1, 1, 0, 0, 1}},
      {{15, 7}, {1, 0, 0, 0, 1, 0, 1, 1, 1}},
      {{15, 5}, {1, 1, 1, 0, 1, 1, 0, 0, 1, 0, 1}},
      {{31, 21}, {1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1}},
      {{31, 16}, {1, 1, 1, 1, 0, 1, 0, 1, 1, 1, 1, 1, 0, 0, 0, 1}},
  };
  const auto it = kTable.find({n, k});
  if (it == kTable.end()) return std::nullopt;
  return cyclic_code(n, it->second);
}

LinearCode random_equivalent(const LinearCode& code, RandomStream& rng) {
  const auto perm = Permutation::random(code.n(), rng);
  const BitMatrix basis = random_nonsingular(code.k(), rng);
  BitMatrix G = basis * code.G * perm.as_matrix();
  BitMatrix H = parity_check_from_generator(G);
  return LinearCode{std::move(G), std::move(H), code.d};
}

BruteForceDecoder::BruteForceDecoder(const LinearCode& code, std::vector<std::size_t> erasures) : G_(code.G) {
  std::sort(erasures.begin(), erasures.end());
  erasures.erase(std::unique(erasures.begin(), erasures.end()), erasures.end());
  std::vector<bool> erased(code.n(), false);
  for (std::size_t i : erasures) {
    if (i >= code.n()) throw DomainError("erasure position out of range");
    erased[i] = true;
  }
  for (std::size_t i = 0; i < code.n(); ++i) {
    if (!erased[i]) kept_.push_back(i);
  }

  punctured_G_ = BitMatrix(code.k(), kept_.size());
  for (std::size_t r = 0; r < code.k(); ++r) punctured_G_.row(r) = code.G.row(r).select(kept_);
  if (rank(punctured_G_) != code.k()) {
    throw RankDeficient("puncturing the erasures collapses the code dimension");
  }
  punctured_Ht_ = parity_check_from_generator(punctured_G_).transpose();
}

BitVector BruteForceDecoder::decode(const BitVector& y, std::size_t t_max) const {
  if (y.size() != G_.cols()) throw DomainError("decode: received word has wrong length");
  const BitVector yp = y.select(kept_);
  const BitVector target = yp * punctured_Ht_;
  const std::size_t len = kept_.size();

  std::optional<BitVector> error;
  for (std::size_t w = 0; w <= t_max && w <= len && !error; ++w) {
    for_each_combination(len, w, [&](const std::vector<std::size_t>& idx) {
      BitVector syn(punctured_Ht_.cols());
      for (std::size_t i : idx) syn ^= punctured_Ht_.row(i);
      if (syn == target) {
        error = BitVector::from_support(len, idx);
        return true;
      }
      return false;
    });
  }
  if (!error) throw DecodeFailure();

  const BitVector message = solve_left(punctured_G_, yp ^ *error);
  return message * G_;
}

BitVector decode_errors_erasures(const LinearCode& code, const BitVector& y,
                                 const std::vector<std::size_t>& erasures, std::size_t t_max) {
  return BruteForceDecoder(code, erasures).decode(y, t_max);
}

}  // namespace ktk
