#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ktk/bit_matrix.hpp"
#include "ktk/linear_code.hpp"
#include "ktk/permutation.hpp"

namespace ktk {

class RandomStream;

enum class Variant {
  Base,            ///< E_pub = (W D (U G + P1) + P2) M
  MaskedCodeword,  ///< E_pub = (W U G + W D P1 + P2) M
  Concatenated,    ///< G = [G0 | G1], erasures on the G1 block
};

std::string_view to_string(Variant v);
/// Accepts "base", "masked", "concatenated"; throws ParamError otherwise.
Variant parse_variant(std::string_view name);

/// How the public mask M is drawn: a permutation (the attacked setting) or a
/// general nonsingular matrix.
enum class MaskKind { Permutation, General };

std::string_view to_string(MaskKind m);
MaskKind parse_mask_kind(std::string_view name);

struct SchemeParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  std::size_t t = 0;
  std::size_t r_D = 0;
  std::size_t a = 0;
  Variant variant = Variant::Base;

  /// Concatenated variant: G0 has length n0 = n - v and distance d0 = d - v, v = r_D.
  std::size_t v() const noexcept { return r_D; }
  std::size_t n0() const noexcept { return n - r_D; }
  std::size_t d0() const noexcept { return d - r_D; }

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// Throws ParamError naming the first violated constraint.
void validate_params(const SchemeParams& p);

struct PublicKey {
  SchemeParams params;
  MaskKind mask_kind = MaskKind::Permutation;
  BitMatrix G_pub;  ///< k x n
  BitMatrix E_pub;  ///< n x n
};

struct PrivateKey {
  LinearCode code;
  std::variant<Permutation, BitMatrix> mask;  ///< P, or general nonsingular M
  BitMatrix W;
  DiagonalSelector D;
  Permutation P1;
  Permutation P2;
  BitMatrix U;  ///< n x k

  /// Derived on construction by finalize_private_key().
  BitMatrix error_map;          ///< W D P1 + P2
  BitMatrix error_map_inverse;  ///< (W D P1 + P2)^-1
  std::vector<std::size_t> erasures;  ///< P1-image of D.ones, sorted
  std::shared_ptr<const ErasureDecoder> decoder;
  PublicKey pub;

  BitMatrix mask_matrix() const;
  /// y * M^-1.
  BitVector unmask(const BitVector& y) const;
  /// P2 * P, the permutation the structural attack recovers. Throws DomainError
  /// when the mask is a general matrix.
  Permutation composite_permutation() const;
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
  std::uint64_t seed = 0;
};

struct KeygenOptions {
  MaskKind mask = MaskKind::Permutation;
  /// Use this code (or G0 for Concatenated) instead of rejection sampling.
  std::optional<LinearCode> code;
  /// Draw the code as a random equivalent of a built-in BCH code.
  bool bch = false;
  std::size_t max_code_rejections = 100000;
};

/// Public matrices for the given secret factors.
BitMatrix compose_public_error_matrix(Variant variant, const BitMatrix& G, const BitMatrix& W,
                                      const DiagonalSelector& D, const Permutation& P1, const Permutation& P2,
                                      const BitMatrix& U, const BitMatrix& M);

/// Recomputes the derived fields (error map, inverse, erasures, decoder, pub)
/// from the secret factors. Throws SingularError if W D P1 + P2 is singular.
void finalize_private_key(PrivateKey& priv, const SchemeParams& params, MaskKind mask_kind);

/// All randomness comes from streams keyed by `seed`.
KeyPair keygen(const SchemeParams& params, std::uint64_t seed, const KeygenOptions& options = {});

struct Ciphertext {
  BitVector y;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// y = m G_pub + e E_pub with e uniform of weight exactly t.
Ciphertext encrypt(const PublicKey& pub, const BitVector& m, RandomStream& rng);
/// Same, with a caller-chosen error vector.
Ciphertext encrypt_with_error(const PublicKey& pub, const BitVector& m, const BitVector& e);

/// Recovers m; throws DecryptError for ciphertexts that are not honest encryptions.
BitVector decrypt(const PrivateKey& priv, const Ciphertext& ct);
/// The error vector e recovered during decryption (same checks as decrypt).
BitVector recover_error(const PrivateKey& priv, const Ciphertext& ct);

/// H_pub with G_pub H_pub^T = 0.
BitMatrix public_parity(const PublicKey& pub);

}  // namespace ktk
