#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "ktk/scheme.hpp"

namespace ktk::io {

// Key bundle layout (one directory):
//   params.json     {n, k, d, t, r_D, a, variant, seed, mask}
//   pub_G.gf2m, pub_E.gf2m
//   private part: priv_G.gf2m, priv_H.gf2m, priv_code.json {n, k, d},
//   priv_W.gf2m, priv_U.gf2m, priv_P.perm (or priv_M.gf2m for a general mask),
//   priv_P1.perm, priv_P2.perm, priv_D.json (index list)

nlohmann::json params_to_json(const SchemeParams& p);
/// Throws ParamError on missing or ill-typed fields.
SchemeParams params_from_json(const nlohmann::json& j);

void write_code(const std::filesystem::path& G_path, const std::filesystem::path& H_path,
                const std::filesystem::path& sidecar_path, const LinearCode& code);
LinearCode read_code(const std::filesystem::path& G_path, const std::filesystem::path& H_path,
                     const std::filesystem::path& sidecar_path);

void write_public_bundle(const std::filesystem::path& dir, const PublicKey& pub, std::uint64_t seed);
void write_bundle(const std::filesystem::path& dir, const KeyPair& kp);

struct PublicBundle {
  PublicKey pub;
  std::uint64_t seed = 0;
};
PublicBundle read_public_bundle(const std::filesystem::path& dir);
/// Rebuilds the private key and checks that it reproduces the stored public matrices.
KeyPair read_bundle(const std::filesystem::path& dir);

void write_ciphertext(const std::filesystem::path& path, const Ciphertext& ct);
/// Throws FormatError unless the file holds a single-row matrix.
Ciphertext read_ciphertext(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace ktk::io
