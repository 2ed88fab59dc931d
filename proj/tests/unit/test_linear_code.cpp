#include <gtest/gtest.h>

#include "ktk/errors.hpp"
#include "ktk/linear_code.hpp"
#include "ktk/permutation.hpp"
#include "ktk/rng.hpp"
#include "oracle.hpp"

using namespace ktk;

namespace {

void expect_valid(const LinearCode& c) {
  EXPECT_TRUE((c.G * c.H.transpose()).is_zero());
  EXPECT_EQ(rank(c.G), c.k());
  EXPECT_EQ(rank(c.H), c.n() - c.k());
  EXPECT_EQ(c.d, oracle::min_distance(c.G));
}

const std::vector<int> kBch15_5{1, 1, 1, 0, 1, 1, 0, 0, 1, 0, 1};

}  // namespace

TEST(ParityCheck, Examples) {
  EXPECT_EQ(parity_check_from_generator(BitMatrix{{1, 1}}), (BitMatrix{{1, 1}}));

  // [I | A] -> [A^T | I]
  const BitMatrix g{{1, 0, 0, 1, 1}, {0, 1, 0, 0, 1}, {0, 0, 1, 1, 0}};
  const BitMatrix h{{1, 0, 1, 1, 0}, {1, 1, 0, 0, 1}};
  EXPECT_EQ(parity_check_from_generator(g), h);

  RandomStream rng(1, "pc");
  const auto rand_g = oracle::with_rank(5, 15, 5, rng);
  const auto rand_h = parity_check_from_generator(rand_g);
  EXPECT_TRUE((rand_g * rand_h.transpose()).is_zero());
  EXPECT_EQ(rank(rand_h), 10U);
  EXPECT_THROW(parity_check_from_generator(BitMatrix{{1, 1, 0}, {1, 1, 0}}), RankDeficient);
}

TEST(MinDistance, Examples) {
  EXPECT_EQ(min_distance_bruteforce(BitMatrix{{1, 1, 1}}).distance, 3U);
  const auto bch = cyclic_code(15, kBch15_5);
  EXPECT_EQ(bch.k(), 5U);
  const auto md = min_distance_bruteforce(bch.G);
  EXPECT_EQ(md.distance, 7U);
  EXPECT_EQ(oracle::min_distance(bch.G), 7U);
  EXPECT_EQ(md.witness.weight(), 7U);
  EXPECT_NO_THROW(solve_left(bch.G, md.witness));
  EXPECT_THROW(min_distance_bruteforce(BitMatrix(25, 30)), BudgetExceeded);
}

TEST(MinDistance, MatchesNaiveOnRandomCodes) {
  RandomStream rng(2, "md");
  for (int i = 0; i < 60; ++i) {
    const std::size_t k = 1 + rng.uniform(8), n = k + 1 + rng.uniform(12);
    const auto g = oracle::with_rank(k, n, k, rng);
    EXPECT_EQ(min_distance_bruteforce(g).distance, oracle::min_distance(g));
  }
}

TEST(BchTable, Distances) {
  const std::pair<std::pair<int, int>, int> table[] = {{{7, 4}, 3},  {{15, 11}, 3}, {{15, 7}, 5},
                                                       {{15, 5}, 7}, {{31, 21}, 5}, {{31, 16}, 7}};
  for (auto [nk, d] : table) {
    const auto code = bch_code(nk.first, nk.second);
    ASSERT_TRUE(code.has_value());
    EXPECT_EQ(code->d, static_cast<std::size_t>(d));
    EXPECT_TRUE((code->G * code->H.transpose()).is_zero());
  }
  EXPECT_FALSE(bch_code(15, 6).has_value());
}

TEST(SampleCode, Examples) {
  RandomStream rng(3, "sample");
  const auto rep = sample_code_with_distance(3, 1, 3, rng);
  EXPECT_EQ(rep.G, (BitMatrix{{1, 1, 1}}));
  EXPECT_EQ(rep.d, 3U);

  RandomStream rng2(4, "sample");
  const auto c = sample_code_with_distance(15, 5, 7, rng2);
  expect_valid(c);
  EXPECT_TRUE(c.d == 7 || c.d == 8);

  RandomStream rng3(5, "sample");
  EXPECT_THROW(sample_code_with_distance(15, 5, 15, rng3, 1000), BudgetExceeded);
}

TEST(SampleCode, ManySeeds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream rng(seed, "code");
    const auto c = sample_code_with_distance(15, 5, 7, rng);
    expect_valid(c);
    EXPECT_GE(c.d, 7U);
  }
}

TEST(RandomEquivalent, KeepsDistance) {
  RandomStream rng(6, "equiv");
  const auto bch = *bch_code(15, 5);
  for (int i = 0; i < 10; ++i) {
    const auto c = random_equivalent(bch, rng);
    expect_valid(c);
    EXPECT_EQ(c.d, 7U);
  }
}

TEST(Decoder, Examples) {
  RandomStream rng(7, "dec");
  const auto code = *bch_code(15, 5);
  const auto c = rng.vector(5) * code.G;
  EXPECT_EQ(decode_errors_erasures(code, c, {}, 0), c);

  const auto rep = make_code(BitMatrix{{1, 1, 1}});
  EXPECT_EQ(decode_errors_erasures(rep, BitVector::from_string("101"), {}, 1), BitVector::from_string("111"));
  EXPECT_EQ(decode_errors_erasures(rep, BitVector::from_string("100"), {}, 1), BitVector::from_string("000"));
}

TEST(Decoder, ErrorsAndErasures) {
  RandomStream rng(8, "dec2");
  RandomStream code_rng(9, "code");
  const auto code = sample_code_with_distance(15, 5, 7, code_rng);
  const std::vector<std::size_t> erasures{3, 11};
  const BruteForceDecoder dec(code, erasures);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = rng.vector(5) * code.G;
    auto y = c;
    // Up to two flips off the erasures, anything on them.
    const auto w = rng.uniform(3);
    for (std::size_t i : rng.sample_indices(13, w)) y.flip(dec.kept()[i]);
    for (std::size_t j : erasures) y.set(j, rng.bit());
    ASSERT_EQ(dec.decode(y, 2), c);
  }
}

TEST(Decoder, FailsBeyondRadius) {
  const auto code = make_code(BitMatrix{{1, 1, 1, 1, 1}});
  EXPECT_THROW(decode_errors_erasures(code, BitVector::from_string("11000"), {}, 1), DecodeFailure);
  EXPECT_THROW(BruteForceDecoder(make_code(BitMatrix{{1, 1, 0}}), {0, 1}), RankDeficient);
}

TEST(ForEachCombination, LexicographicOrder) {
  std::vector<std::vector<std::size_t>> seen;
  for_each_combination(4, 2, [&](const std::vector<std::size_t>& idx) {
    seen.push_back(idx);
    return false;
  });
  const std::vector<std::vector<std::size_t>> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(seen, expected);
}
