#include "ktk/scheme.hpp"

#include <algorithm>

#include "ktk/errors.hpp"
#include "ktk/rng.hpp"

namespace ktk {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Base:
      return "base";
    case Variant::MaskedCodeword:
      return "masked";
    case Variant::Concatenated:
      return "concatenated";
  }
  return "base";
}

Variant parse_variant(std::string_view name) {
  if (name == "base") return Variant::Base;
  if (name == "masked") return Variant::MaskedCodeword;
  if (name == "concatenated") return Variant::Concatenated;
  throw ParamError("variant", "unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(MaskKind m) { return m == MaskKind::Permutation ? "permutation" : "general"; }

MaskKind parse_mask_kind(std::string_view name) {
  if (name == "permutation") return MaskKind::Permutation;
  if (name == "general") return MaskKind::General;
  throw ParamError("mask", "unknown mask kind '" + std::string(name) + "'");
}

void validate_params(const SchemeParams& p) {
  if (p.t < 1) throw ParamError("t>=1", "t must be at least 1");
  if (p.a < 1) throw ParamError("a>=1", "a must be at least 1");
  if (p.k < 1 || p.k >= p.n) throw ParamError("k<n", "need 1 <= k < n");
  if (p.r_D + 2 * p.t + p.a != p.d) {
    throw ParamError("equation", "r_D + 2t + a must equal d (" + std::to_string(p.r_D) + " + " +
                                     std::to_string(2 * p.t) + " + " + std::to_string(p.a) +
                                     " != " + std::to_string(p.d) + ")");
  }
  if (p.r_D >= p.d) throw ParamError("r_D<d", "r_D must be below d");
  if (p.r_D > p.n) throw ParamError("r_D<=n", "r_D cannot exceed n");
  if (p.variant == Variant::Concatenated && p.n0() <= p.k) {
    throw ParamError("n0>k", "concatenated variant needs n - r_D > k");
  }
}

BitMatrix PrivateKey::mask_matrix() const {
  if (const auto* perm = std::get_if<Permutation>(&mask)) return perm->as_matrix();
  return std::get<BitMatrix>(mask);
}

BitVector PrivateKey::unmask(const BitVector& y) const {
  if (const auto* perm = std::get_if<Permutation>(&mask)) return perm->inverse().apply(y);
  return y * inverse(std::get<BitMatrix>(mask));
}

Permutation PrivateKey::composite_permutation() const {
  const auto* perm = std::get_if<Permutation>(&mask);
  if (perm == nullptr) throw DomainError("composite permutation needs a permutation mask");
  return P2 * *perm;
}

BitMatrix compose_public_error_matrix(Variant variant, const BitMatrix& G, const BitMatrix& W,
                                      const DiagonalSelector& D, const Permutation& P1, const Permutation& P2,
                                      const BitMatrix& U, const BitMatrix& M) {
  const BitMatrix WD = D.mask_columns(W);
  const BitMatrix erasure_part = WD * P1.as_matrix();
  BitMatrix inner = erasure_part + P2.as_matrix();
  if (variant == Variant::MaskedCodeword) {
    inner += W * U * G;
  } else {
    inner += WD * U * G;
  }
  return inner * M;
}

namespace {

std::vector<std::size_t> erasure_positions(const DiagonalSelector& D, const Permutation& P1) {
  std::vector<std::size_t> out;
  for (std::size_t i : D.ones()) out.push_back(P1(i));
  std::sort(out.begin(), out.end());
  return out;
}

// P1 sending D.ones onto the tail block {n0, ..., n-1}.
Permutation tail_aligned_permutation(const DiagonalSelector& D, std::size_t n, RandomStream& rng) {
  const std::size_t v = D.r();
  std::vector<std::uint32_t> head(n - v);
  std::vector<std::uint32_t> tail(v);
  for (std::size_t i = 0; i < n - v; ++i) head[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < v; ++i) tail[i] = static_cast<std::uint32_t>(n - v + i);
  rng.shuffle(head);
  rng.shuffle(tail);
  std::vector<bool> selected(n, false);
  for (std::size_t i : D.ones()) selected[i] = true;
  std::vector<std::uint32_t> image(n);
  std::size_t h = 0;
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) image[i] = selected[i] ? tail[t++] : head[h++];
  return Permutation(std::move(image));
}

LinearCode draw_code(std::size_t n, std::size_t k, std::size_t d, std::uint64_t seed, const KeygenOptions& options) {
  RandomStream rng(seed, "code");
  if (options.code) {
    if (options.code->n() != n || options.code->k() != k) throw ParamError("code", "supplied code has wrong shape");
    if (options.code->d < d) throw ParamError("code", "supplied code distance is below the requirement");
    return *options.code;
  }
  if (options.bch) {
    auto base = bch_code(n, k);
    if (!base) throw ParamError("code", "no built-in BCH code with these (n, k)");
    if (base->d < d) throw ParamError("code", "built-in BCH code distance is below the requirement");
    return random_equivalent(*base, rng);
  }
  return sample_code_with_distance(n, k, d, rng, options.max_code_rejections);
}

}  // namespace

void finalize_private_key(PrivateKey& priv, const SchemeParams& params, MaskKind mask_kind) {
  const std::size_t n = params.n;
  priv.error_map = priv.D.mask_columns(priv.W) * priv.P1.as_matrix() + priv.P2.as_matrix();
  priv.error_map_inverse = inverse(priv.error_map);
  priv.erasures = erasure_positions(priv.D, priv.P1);
  priv.decoder = std::make_shared<BruteForceDecoder>(priv.code, priv.erasures);

  const BitMatrix M = priv.mask_matrix();
  if (M.rows() != n || M.cols() != n) throw DomainError("mask has wrong dimensions");
  priv.pub.params = params;
  priv.pub.mask_kind = mask_kind;
  priv.pub.G_pub = priv.code.G * M;
  priv.pub.E_pub = compose_public_error_matrix(params.variant, priv.code.G, priv.W, priv.D, priv.P1, priv.P2,
                                               priv.U, M);
}

KeyPair keygen(const SchemeParams& params, std::uint64_t seed, const KeygenOptions& options) {
  validate_params(params);
  const std::size_t n = params.n;
  const std::size_t k = params.k;

  PrivateKey priv;
  if (params.variant == Variant::Concatenated) {
    LinearCode head = draw_code(params.n0(), k, params.d0(), seed, options);
    RandomStream tail_rng(seed, "G1");
    const BitMatrix G = head.G.hconcat(BitMatrix::random(k, params.v(), tail_rng));
    priv.code = make_code(G);
  } else {
    priv.code = draw_code(n, k, params.d, seed, options);
  }

  RandomStream d_rng(seed, "D");
  priv.D = DiagonalSelector::random(n, params.r_D, d_rng);
  RandomStream p1_rng(seed, "P1");
  priv.P1 = params.variant == Variant::Concatenated ? tail_aligned_permutation(priv.D, n, p1_rng)
                                                    : Permutation::random(n, p1_rng);
  RandomStream u_rng(seed, "U");
  priv.U = BitMatrix::random(n, k, u_rng);
  RandomStream mask_rng(seed, "M");
  if (options.mask == MaskKind::Permutation) {
    priv.mask = Permutation::random(n, mask_rng);
  } else {
    priv.mask = random_nonsingular(n, mask_rng);
  }

  // Resample P2 up to 256 times per W, then draw a fresh W.
  constexpr std::uint64_t kP2Attempts = 256;
  for (std::uint64_t w_attempt = 0;; ++w_attempt) {
    RandomStream w_rng(seed, "W", w_attempt);
    priv.W = random_nonsingular(n, w_rng);
    const BitMatrix erasure_part = priv.D.mask_columns(priv.W) * priv.P1.as_matrix();
    for (std::uint64_t p2_attempt = 0; p2_attempt < kP2Attempts; ++p2_attempt) {
      RandomStream p2_rng(seed, "P2", w_attempt * kP2Attempts + p2_attempt);
      priv.P2 = Permutation::random(n, p2_rng);
      if (rank(erasure_part + priv.P2.as_matrix()) != n) continue;
      finalize_private_key(priv, params, options.mask);
      KeyPair kp;
      kp.pub = priv.pub;
      kp.priv = std::move(priv);
      kp.seed = seed;
      return kp;
    }
  }
}

Ciphertext encrypt_with_error(const PublicKey& pub, const BitVector& m, const BitVector& e) {
  if (m.size() != pub.params.k) throw DomainError("encrypt: message length must be k");
  if (e.size() != pub.params.n) throw DomainError("encrypt: error length must be n");
  return Ciphertext{m * pub.G_pub + e * pub.E_pub};
}

Ciphertext encrypt(const PublicKey& pub, const BitVector& m, RandomStream& rng) {
  return encrypt_with_error(pub, m, rng.weight_vector(pub.params.n, pub.params.t));
}

BitVector recover_error(const PrivateKey& priv, const Ciphertext& ct) {
  const auto& params = priv.pub.params;
  if (ct.y.size() != params.n) throw DomainError("decrypt: ciphertext length must be n");

  const BitVector z = priv.unmask(ct.y);
  BitVector masked_codeword;
  try {
    masked_codeword = priv.decoder->decode(z, params.t);
  } catch (const DecodeFailure&) {
    throw DecryptError(DecryptError::Kind::Decode, "decoding failed");
  }
  BitVector e = (z ^ masked_codeword) * priv.error_map_inverse;
  if (e.weight() != params.t) {
    throw DecryptError(DecryptError::Kind::Weight, "recovered error has weight " + std::to_string(e.weight()) +
                                                       ", expected " + std::to_string(params.t));
  }
  return e;
}

BitVector decrypt(const PrivateKey& priv, const Ciphertext& ct) {
  const BitVector e = recover_error(priv, ct);
  const BitVector c = ct.y ^ (e * priv.pub.E_pub);
  try {
    return solve_left(priv.pub.G_pub, c);
  } catch (const NoSolution&) {
    throw DecryptError(DecryptError::Kind::Inconsistent, "c = y - e E_pub is not a public codeword");
  }
}

BitMatrix public_parity(const PublicKey& pub) { return parity_check_from_generator(pub.G_pub); }

}  // namespace ktk
