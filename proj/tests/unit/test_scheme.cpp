#include <filesystem>

#include <gtest/gtest.h>

#include "ktk/errors.hpp"
#include "ktk/gf2_io.hpp"
#include "ktk/key_bundle.hpp"
#include "ktk/rng.hpp"
#include "ktk/scheme.hpp"

using namespace ktk;

namespace {

const SchemeParams kDesk{15, 5, 7, 2, 2, 1, Variant::Base};

SchemeParams with_variant(SchemeParams p, Variant v) {
  p.variant = v;
  return p;
}

bool in_code(const LinearCode& code, const BitVector& x) { return (x * code.H.transpose()).is_zero(); }

}  // namespace

TEST(ValidateParams, Examples) {
  EXPECT_NO_THROW(validate_params({1023, 523, 101, 33, 33, 2, Variant::Base}));
  EXPECT_NO_THROW(validate_params(kDesk));
  try {
    validate_params({15, 5, 7, 3, 2, 1, Variant::Base});
    FAIL();
  } catch (const ParamError& e) {
    EXPECT_EQ(e.constraint(), "equation");
  }
  EXPECT_THROW(validate_params({15, 5, 7, 0, 4, 3, Variant::Base}), ParamError);
  EXPECT_THROW(validate_params({15, 5, 7, 2, 3, 0, Variant::Base}), ParamError);
  EXPECT_THROW(validate_params({5, 5, 7, 2, 2, 1, Variant::Base}), ParamError);
  EXPECT_THROW(validate_params({15, 5, 3, 1, 3, 0, Variant::Base}), ParamError);
}

TEST(Keygen, BaseStructure) {
  const auto kp = keygen(kDesk, 7);
  const auto& priv = kp.priv;
  const BitMatrix P = priv.mask_matrix();
  const BitMatrix D = priv.D.as_matrix();
  const BitMatrix expected_E = (priv.W * D * (priv.U * priv.code.G + priv.P1.as_matrix()) + priv.P2.as_matrix()) * P;
  EXPECT_EQ(kp.pub.E_pub, expected_E);
  EXPECT_EQ(kp.pub.G_pub, priv.code.G * P);
  EXPECT_EQ(rank(kp.pub.G_pub), 5U);
  EXPECT_EQ(rank(priv.W), 15U);
  EXPECT_EQ(priv.D.r(), 2U);
  const BitMatrix error_map = priv.W * D * priv.P1.as_matrix() + priv.P2.as_matrix();
  EXPECT_EQ(error_map * inverse(error_map), BitMatrix::identity(15));
  EXPECT_EQ(priv.error_map, error_map);
  EXPECT_EQ(priv.composite_permutation().as_matrix(), priv.P2.as_matrix() * P);
}

TEST(Keygen, PublicParityMatchesErrorMap) {
  const auto kp = keygen(kDesk, 8);
  const auto H_pub = public_parity(kp.pub);
  EXPECT_TRUE((kp.pub.G_pub * H_pub.transpose()).is_zero());
  const auto inv = inverse(kp.priv.error_map);
  RandomStream rng(1, "membership");
  for (int i = 0; i < 300; ++i) {
    // Half the time pick e with e (WDP1 + P2) in C.
    const BitVector e = i % 2 ? rng.vector(15) : (rng.vector(5) * kp.priv.code.G) * inv;
    const bool syndrome_zero = (e * kp.pub.E_pub * H_pub.transpose()).is_zero();
    EXPECT_EQ(syndrome_zero, in_code(kp.priv.code, e * kp.priv.error_map));
  }
}

TEST(Keygen, ZeroSelectorDegenerates) {
  const auto kp = keygen({7, 3, 3, 1, 0, 1, Variant::Base}, 9);
  EXPECT_EQ(kp.pub.E_pub, kp.priv.P2.as_matrix() * kp.priv.mask_matrix());
}

TEST(Keygen, MaskedRankBound) {
  const auto kp = keygen(with_variant(kDesk, Variant::MaskedCodeword), 10);
  const auto& priv = kp.priv;
  const BitMatrix P = priv.mask_matrix();
  EXPECT_EQ(kp.pub.E_pub, (priv.W * priv.U * priv.code.G + priv.W * priv.D.as_matrix() * priv.P1.as_matrix() +
                           priv.P2.as_matrix()) * P);
  const auto residual = kp.pub.E_pub - priv.P2.as_matrix() * P;
  EXPECT_LE(rank(residual), rank(priv.U) + 2);
}

TEST(Keygen, ConcatenatedErasuresOnTail) {
  const SchemeParams p{17, 5, 9, 2, 2, 3, Variant::Concatenated};
  const auto kp = keygen(p, 11);
  EXPECT_EQ(kp.priv.erasures, (std::vector<std::size_t>{15, 16}));
  EXPECT_GE(min_distance_bruteforce(kp.priv.code.G.column_slice(0, 15)).distance, 7U);
}

TEST(Keygen, Deterministic) {
  const auto a = keygen(kDesk, 12), b = keygen(kDesk, 12), c = keygen(kDesk, 13);
  EXPECT_EQ(a.pub.E_pub, b.pub.E_pub);
  EXPECT_EQ(a.pub.G_pub, b.pub.G_pub);
  EXPECT_NE(a.pub.E_pub, c.pub.E_pub);
}

TEST(Keygen, GeneralMask) {
  KeygenOptions opt;
  opt.mask = MaskKind::General;
  const auto kp = keygen(kDesk, 14, opt);
  EXPECT_EQ(rank(kp.priv.mask_matrix()), 15U);
  EXPECT_THROW(kp.priv.composite_permutation(), DomainError);
  RandomStream rng(2, "gm");
  for (int i = 0; i < 100; ++i) {
    const auto m = rng.vector(5);
    EXPECT_EQ(decrypt(kp.priv, encrypt(kp.pub, m, rng)), m);
  }
}

class Roundtrip : public ::testing::TestWithParam<Variant> {};

TEST_P(Roundtrip, DecryptInvertsEncrypt) {
  const SchemeParams p = GetParam() == Variant::Concatenated ? SchemeParams{17, 5, 9, 2, 2, 3, Variant::Concatenated}
                                                             : with_variant(kDesk, GetParam());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto kp = keygen(p, 100 + seed);
    RandomStream rng(seed, "roundtrip");
    for (int i = 0; i < 100; ++i) {
      const auto m = rng.vector(p.k);
      const auto ct = encrypt(kp.pub, m, rng);
      ASSERT_EQ(decrypt(kp.priv, ct), m);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Variants, Roundtrip,
                         ::testing::Values(Variant::Base, Variant::MaskedCodeword, Variant::Concatenated),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Encrypt, ZeroMessageAndErrorWeight) {
  const auto kp = keygen(kDesk, 15);
  RandomStream rng(3, "enc");
  const auto ct = encrypt(kp.pub, BitVector(5), rng);
  const auto e = recover_error(kp.priv, ct);
  EXPECT_EQ(e.weight(), 2U);
  EXPECT_EQ(ct.y, e * kp.pub.E_pub);
}

TEST(Encrypt, FrozenRegressionVector) {
  const auto kp = keygen(kDesk, 2024);
  RandomStream rng(2024, "encrypt", 0);
  const auto ct = encrypt(kp.pub, from_hex("15", 5), rng);
  EXPECT_EQ(to_hex(ct.y), "6703");
  EXPECT_EQ(decrypt(kp.priv, ct), from_hex("15", 5));
}

TEST(Decrypt, RejectsNonCiphertexts) {
  const auto kp = keygen(kDesk, 16);
  try {
    decrypt(kp.priv, Ciphertext{BitVector(15)});
    FAIL();
  } catch (const DecryptError& e) {
    EXPECT_EQ(e.kind(), DecryptError::Kind::Weight);
  }

  RandomStream rng(4, "tamper");
  int refused = 0, wrong = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = rng.vector(5);
    auto ct = encrypt(kp.pub, m, rng);
    ct.y.flip(rng.uniform(15));
    try {
      if (decrypt(kp.priv, ct) != m) ++wrong;
    } catch (const DecryptError&) {
      ++refused;
    }
  }
  EXPECT_GT(refused, 400);
  EXPECT_EQ(refused + wrong, 500);
}

TEST(SchemeProperties, ErasureConfinementAndMaskingTerm) {
  const auto kp = keygen(kDesk, 17);
  const auto& priv = kp.priv;
  const BitMatrix WD = priv.D.mask_columns(priv.W);
  const BitMatrix WDP1 = WD * priv.P1.as_matrix();
  const BitMatrix WDUG = WD * priv.U * priv.code.G;
  RandomStream rng(5, "confine");
  for (int i = 0; i < 1000; ++i) {
    const auto e = rng.weight_vector(15, 2);
    for (std::size_t j : (e * WDP1).support()) {
      EXPECT_TRUE(std::binary_search(priv.erasures.begin(), priv.erasures.end(), j));
    }
    EXPECT_TRUE(in_code(priv.code, e * WDUG));
  }
}

TEST(SchemeProperties, ConcatenatedDecoderIgnoresTail) {
  const SchemeParams p{17, 5, 9, 2, 2, 3, Variant::Concatenated};
  const auto kp = keygen(p, 18);
  RandomStream rng(6, "tail");
  for (int i = 0; i < 200; ++i) {
    const auto c = rng.vector(5) * kp.priv.code.G;
    auto y = c ^ BitVector::from_support(17, rng.sample_indices(15, 2));
    const auto clean = kp.priv.decoder->decode(y, 2);
    y.set(15, rng.bit());
    y.set(16, rng.bit());
    EXPECT_EQ(kp.priv.decoder->decode(y, 2), clean);
    EXPECT_EQ(clean, c);
  }
}

TEST(KeyBundle, Roundtrip) {
  const auto dir = std::filesystem::temp_directory_path() / "ktk_bundle_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (Variant v : {Variant::Base, Variant::MaskedCodeword}) {
    const auto kp = keygen(with_variant(kDesk, v), 19);
    io::write_bundle(dir, kp);
    const auto back = io::read_bundle(dir);
    EXPECT_EQ(back.pub.E_pub, kp.pub.E_pub);
    EXPECT_EQ(back.pub.params, kp.pub.params);
    EXPECT_EQ(back.seed, 19U);
    EXPECT_EQ(back.priv.composite_permutation(), kp.priv.composite_permutation());
    const auto pub = io::read_public_bundle(dir);
    EXPECT_EQ(pub.pub.G_pub, kp.pub.G_pub);
    RandomStream rng(7, "bundle");
    const auto m = rng.vector(5);
    EXPECT_EQ(decrypt(back.priv, encrypt(pub.pub, m, rng)), m);
  }
  // A public matrix that no longer matches the private factors is refused.
  auto other = keygen(kDesk, 20);
  io::write_matrix(dir / "pub_E.gf2m", other.pub.E_pub);
  EXPECT_THROW(io::read_bundle(dir), FormatError);
  std::filesystem::remove_all(dir);
}
