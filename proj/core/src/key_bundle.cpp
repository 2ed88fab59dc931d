#include "ktk/key_bundle.hpp"

#include <fstream>

#include "ktk/errors.hpp"
#include "ktk/gf2_io.hpp"

namespace ktk::io {

namespace fs = std::filesystem;

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json params_to_json(const SchemeParams& p) {
  return {{"n", p.n}, {"k", p.k}, {"d", p.d}, {"t", p.t}, {"r_D", p.r_D}, {"a", p.a},
          {"variant", std::string(to_string(p.variant))}};
}

SchemeParams params_from_json(const nlohmann::json& j) {
  auto field = [&](const char* name) -> std::size_t {
    if (!j.contains(name) || !j[name].is_number_unsigned()) {
      throw ParamError(name, std::string("params: missing or invalid field '") + name + "'");
    }
    return j[name].get<std::size_t>();
  };
  SchemeParams p;
  p.n = field("n");
  p.k = field("k");
  p.d = field("d");
  p.t = field("t");
  p.r_D = field("r_D");
  p.a = field("a");
  if (!j.contains("variant") || !j["variant"].is_string()) throw ParamError("variant", "params: missing variant");
  p.variant = parse_variant(j["variant"].get<std::string>());
  return p;
}

void write_code(const fs::path& G_path, const fs::path& H_path, const fs::path& sidecar_path,
                const LinearCode& code) {
  write_matrix(G_path, code.G);
  write_matrix(H_path, code.H);
  write_json(sidecar_path, {{"n", code.n()}, {"k", code.k()}, {"d", code.d}});
}

LinearCode read_code(const fs::path& G_path, const fs::path& H_path, const fs::path& sidecar_path) {
  LinearCode code{read_matrix(G_path), read_matrix(H_path), 0};
  const auto meta = read_json(sidecar_path);
  std::size_t n = 0, k = 0;
  try {
    code.d = meta.at("d").get<std::size_t>();
    n = meta.at("n").get<std::size_t>();
    k = meta.at("k").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(sidecar_path.string() + ": " + e.what());
  }
  if (n != code.n() || k != code.k() || code.H.cols() != code.n() || code.H.rows() + code.k() != code.n()) {
    throw FormatError("code sidecar does not match matrices");
  }
  return code;
}

void write_public_bundle(const fs::path& dir, const PublicKey& pub, std::uint64_t seed) {
  fs::create_directories(dir);
  auto params = params_to_json(pub.params);
  params["seed"] = seed;
  params["mask"] = std::string(to_string(pub.mask_kind));
  write_json(dir / "params.json", params);
  write_matrix(dir / "pub_G.gf2m", pub.G_pub);
  write_matrix(dir / "pub_E.gf2m", pub.E_pub);
}

void write_bundle(const fs::path& dir, const KeyPair& kp) {
  write_public_bundle(dir, kp.pub, kp.seed);
  const auto& priv = kp.priv;
  write_code(dir / "priv_G.gf2m", dir / "priv_H.gf2m", dir / "priv_code.json", priv.code);
  write_matrix(dir / "priv_W.gf2m", priv.W);
  write_matrix(dir / "priv_U.gf2m", priv.U);
  if (const auto* perm = std::get_if<Permutation>(&priv.mask)) {
    write_permutation(dir / "priv_P.perm", *perm);
  } else {
    write_matrix(dir / "priv_M.gf2m", std::get<BitMatrix>(priv.mask));
  }
  write_permutation(dir / "priv_P1.perm", priv.P1);
  write_permutation(dir / "priv_P2.perm", priv.P2);
  write_json(dir / "priv_D.json", nlohmann::json(std::vector<std::size_t>(priv.D.ones().begin(), priv.D.ones().end())));
}

PublicBundle read_public_bundle(const fs::path& dir) {
  const auto j = read_json(dir / "params.json");
  PublicBundle out;
  out.pub.params = params_from_json(j);
  validate_params(out.pub.params);
  out.seed = j.value("seed", std::uint64_t{0});
  out.pub.mask_kind = parse_mask_kind(j.value("mask", std::string("permutation")));
  out.pub.G_pub = read_matrix(dir / "pub_G.gf2m");
  out.pub.E_pub = read_matrix(dir / "pub_E.gf2m");
  const auto& p = out.pub.params;
  if (out.pub.G_pub.rows() != p.k || out.pub.G_pub.cols() != p.n || out.pub.E_pub.rows() != p.n ||
      out.pub.E_pub.cols() != p.n) {
    throw FormatError("public matrices do not match params.json");
  }
  return out;
}

KeyPair read_bundle(const fs::path& dir) {
  auto pb = read_public_bundle(dir);
  PrivateKey priv;
  priv.code = read_code(dir / "priv_G.gf2m", dir / "priv_H.gf2m", dir / "priv_code.json");
  priv.W = read_matrix(dir / "priv_W.gf2m");
  priv.U = read_matrix(dir / "priv_U.gf2m");
  if (pb.pub.mask_kind == MaskKind::Permutation) {
    priv.mask = read_permutation(dir / "priv_P.perm");
  } else {
    priv.mask = read_matrix(dir / "priv_M.gf2m");
  }
  priv.P1 = read_permutation(dir / "priv_P1.perm");
  priv.P2 = read_permutation(dir / "priv_P2.perm");
  std::vector<std::size_t> ones;
  try {
    ones = read_json(dir / "priv_D.json").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("priv_D.json: " + std::string(e.what()));
  }
  priv.D = DiagonalSelector(pb.pub.params.n, ones);
  finalize_private_key(priv, pb.pub.params, pb.pub.mask_kind);
  if (!(priv.pub.G_pub == pb.pub.G_pub) || !(priv.pub.E_pub == pb.pub.E_pub)) {
    throw FormatError("private key does not reproduce the public matrices");
  }
  KeyPair kp;
  kp.pub = std::move(pb.pub);
  kp.priv = std::move(priv);
  kp.seed = pb.seed;
  return kp;
}

void write_ciphertext(const fs::path& path, const Ciphertext& ct) {
  write_matrix(path, BitMatrix(std::vector<BitVector>{ct.y}));
}

Ciphertext read_ciphertext(const fs::path& path) {
  const BitMatrix m = read_matrix(path);
  if (m.rows() != 1) throw FormatError("ciphertext file must hold exactly one row");
  return Ciphertext{m.row(0)};
}

}  // namespace ktk::io
