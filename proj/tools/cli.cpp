#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ktk/attack.hpp"
#include "ktk/errors.hpp"
#include "ktk/gf2_io.hpp"
#include "ktk/key_bundle.hpp"
#include "ktk/linear_code.hpp"
#include "ktk/report.hpp"
#include "ktk/rng.hpp"
#include "ktk/scheme.hpp"
#include "ktk/version.hpp"
#include "ktk/workfactor.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ktk::cli {
namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// --seed wins over KTK_SEED; with neither, a fresh seed is drawn and recorded.
struct SeedOption {
  std::optional<std::uint64_t> flag;

  std::uint64_t resolve() const {
    if (flag) return *flag;
    if (const char* env = std::getenv("KTK_SEED"); env != nullptr && *env != '\0') {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used, 0);
        if (used == std::string_view(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw ParamError("seed", std::string("KTK_SEED is not an unsigned integer: ") + env);
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
};

std::vector<std::string> replay_args(std::vector<std::string> args, std::uint64_t seed) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--seed" && i + 1 < args.size()) {
      args[i + 1] = std::to_string(seed);
      return args;
    }
    if (args[i].rfind("--seed=", 0) == 0) {
      args[i] = "--seed=" + std::to_string(seed);
      return args;
    }
  }
  args.push_back("--seed");
  args.push_back(std::to_string(seed));
  return args;
}

void emit_manifest(const io::RunManifest& m, const std::string& manifest_path, std::ostream* out) {
  const json j = io::to_json(m);
  if (!manifest_path.empty()) io::write_json(manifest_path, j);
  if (out != nullptr) *out << j.dump(2) << "\n";
}

io::RunManifest base_manifest(std::string command, const std::vector<std::string>& args, std::uint64_t seed) {
  io::RunManifest m;
  m.command = std::move(command);
  m.argv = replay_args(args, seed);
  m.master_seed = seed;
  m.tool_version = std::string(kVersion);
  return m;
}

void error_object(std::ostream& err, std::string_view kind, const std::string& message, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  err << extra.dump() << "\n";
}

// --- keygen -----------------------------------------------------------------

struct KeygenArgs {
  SchemeParams params;
  std::string variant = "base";
  std::string mask = "permutation";
  std::string code = "random";
  std::size_t max_rejections = 100000;
  SeedOption seed;
  std::string out_dir;
  std::string manifest;
};

int cmd_keygen(const KeygenArgs& a, const std::vector<std::string>& args, Streams io) {
  SchemeParams params = a.params;
  params.variant = parse_variant(a.variant);
  KeygenOptions options;
  options.mask = parse_mask_kind(a.mask);
  if (a.code == "bch") {
    options.bch = true;
  } else if (a.code != "random") {
    throw ParamError("code", "--code must be random or bch");
  }
  options.max_code_rejections = a.max_rejections;
  const std::uint64_t seed = a.seed.resolve();

  const KeyPair kp = keygen(params, seed, options);
  fs::create_directories(a.out_dir);
  io::write_bundle(a.out_dir, kp);

  auto m = base_manifest("keygen", args, seed);
  m.params = params;
  m.artifacts["bundle"] = a.out_dir;
  emit_manifest(m, a.manifest, &io.out);
  return kOk;
}

// --- encrypt / decrypt ------------------------------------------------------

struct EncryptArgs {
  std::string key;
  std::string msg;
  SeedOption seed;
  std::string out;
  std::string manifest;
};

int cmd_encrypt(const EncryptArgs& a, const std::vector<std::string>& args, Streams io) {
  const auto bundle = io::read_public_bundle(a.key);
  const auto& pub = bundle.pub;
  const BitVector m = from_hex(a.msg, pub.params.k);
  const std::uint64_t seed = a.seed.resolve();
  RandomStream rng(seed, "encrypt", 0);
  const Ciphertext ct = encrypt(pub, m, rng);
  io::write_ciphertext(a.out, ct);

  auto manifest = base_manifest("encrypt", args, seed);
  manifest.params = pub.params;
  manifest.artifacts["key"] = a.key;
  manifest.artifacts["ciphertext"] = a.out;
  emit_manifest(manifest, a.manifest, &io.out);
  return kOk;
}

struct DecryptArgs {
  std::string key;
  std::string ct;
};

int cmd_decrypt(const DecryptArgs& a, Streams io) {
  const KeyPair kp = io::read_bundle(a.key);
  const Ciphertext ct = io::read_ciphertext(a.ct);
  if (ct.y.size() != kp.pub.params.n) {
    throw FormatError("ciphertext length " + std::to_string(ct.y.size()) + " does not match n = " +
                      std::to_string(kp.pub.params.n));
  }
  io.out << to_hex(decrypt(kp.priv, ct)) << "\n";
  return kOk;
}

// --- attack -----------------------------------------------------------------

struct AttackArgs {
  std::string key;
  std::string ct;
  std::string alg = "prange";
  std::size_t p = 2;
  std::uint64_t budget = 0;
  std::uint64_t isd_budget = 100000;
  double confidence = 0.999999;
  SeedOption seed;
  unsigned threads = 1;
  std::string stage = "full";
  std::string perm_in;
  std::string perm_out;
  std::string out;
  std::string manifest;
  bool quiet = false;
};

int cmd_attack(const AttackArgs& a, const std::vector<std::string>& args, Streams io) {
  const auto bundle = io::read_public_bundle(a.key);
  const auto& pub = bundle.pub;
  const std::uint64_t seed = a.seed.resolve();

  attack::AttackConfig cfg;
  cfg.seed = seed;
  cfg.perm_budget = a.budget;
  cfg.threads = std::max(1U, a.threads);
  cfg.isd.algorithm = a.alg == "prange" ? attack::IsdAlgorithm::Prange : attack::IsdAlgorithm::LeeBrickell;
  cfg.isd.p = a.p;
  cfg.isd.max_iterations = a.isd_budget;
  cfg.isd.target_confidence = a.confidence;
  if (!a.quiet) {
    cfg.progress = [&io](const attack::ProgressEvent& e) { io.err << io::to_json(e).dump() << "\n"; };
  }
  if (cfg.isd.algorithm == attack::IsdAlgorithm::LeeBrickell && a.p > pub.params.t) {
    throw ParamError("p", "--p must not exceed t");
  }

  auto manifest = base_manifest("attack", args, seed);
  manifest.params = pub.params;
  manifest.artifacts["key"] = a.key;

  attack::AttackReport report;
  if (a.stage == "recover-perm") {
    report = attack::recover_permutation_stage(pub, cfg);
    if (report.recovered_perm && !a.perm_out.empty()) {
      io::write_permutation(a.perm_out, *report.recovered_perm);
      manifest.artifacts["permutation"] = a.perm_out;
    }
  } else {
    if (a.ct.empty()) throw ParamError("ct", "--ct is required for stage " + a.stage);
    const Ciphertext ct = io::read_ciphertext(a.ct);
    if (ct.y.size() != pub.params.n) throw FormatError("ciphertext length does not match n");
    manifest.artifacts["ciphertext"] = a.ct;
    if (a.stage == "isd") {
      if (a.perm_in.empty()) throw ParamError("perm", "--perm is required for stage isd");
      const Permutation sigma = io::read_permutation(a.perm_in);
      if (sigma.size() != pub.params.n) throw FormatError("permutation length does not match n");
      report = attack::attack_with_permutation(pub, sigma, ct.y, cfg);
    } else {
      report = attack::full_attack(pub, ct.y, cfg);
    }
  }

  const json j = io::to_json(report);
  if (!a.out.empty()) {
    io::write_json(a.out, j);
    manifest.artifacts["report"] = a.out;
  }
  if (!a.manifest.empty()) emit_manifest(manifest, a.manifest, nullptr);
  io.out << j.dump(2) << "\n";
  return report.verified ? kOk : kAttackFailed;
}

// --- estimate / mindist ----------------------------------------------------

struct EstimateArgs {
  std::int64_t n = 0, k = 0, d = 0, t = 0, rd = 0, l = 0, p = 0;
  std::int64_t mce_n = 0, mce_k = 0, mce_t = 0;
  double q = 0.0;
  std::int64_t r = 0;
};

int cmd_estimate(const std::string& kind, const EstimateArgs& a, Streams io) {
  namespace wf = workfactor;
  json j;
  if (kind == "perm-work") {
    j = io::to_json(wf::perm_recovery_work(a.n, a.rd));
  } else if (kind == "naive") {
    j = io::to_json(wf::naive_security_exponent(a.n));
  } else if (kind == "isd-success") {
    j = io::to_json(wf::isd_iteration_success(a.n, a.k, a.t, a.l, a.p));
  } else if (kind == "ratio") {
    const wf::EstimatorParams mce{a.mce_n, a.mce_k, 0, a.mce_t, 0, a.l, a.p};
    const wf::EstimatorParams ktk{a.n, a.k, a.d, a.t, a.rd, a.l, a.p};
    j = io::to_json(wf::ratio_vs_mceliece(mce, ktk));
  } else if (kind == "binom") {
    wf::Estimate e;
    e.log2_value = wf::log2_binomial(a.n, a.k);
    e.formula_id = "log2_binomial";
    e.inputs.n = a.n;
    e.inputs.k = a.k;
    j = io::to_json(e);
  } else {
    j = {{"formula_id", "repeat_success"},
         {"value", wf::repeat_success(a.q, a.r)},
         {"inputs", {{"q", a.q}, {"r", a.r}}}};
  }
  io.out << j.dump(2) << "\n";
  return kOk;
}

int cmd_mindist(const std::string& gen, Streams io) {
  const BitMatrix G = io::read_matrix(gen);
  const auto md = min_distance_bruteforce(G);
  const json j{{"n", G.cols()},
               {"k", G.rows()},
               {"d_min", md.distance},
               {"witness_codeword", to_hex(md.witness)},
               {"witness_weight", md.witness.weight()}};
  io.out << j.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

void add_seed(CLI::App* cmd, SeedOption& seed) {
  cmd->add_option_function<std::uint64_t>(
         "--seed", [&seed](const std::uint64_t& v) { seed.flag = v; },
         "master seed (KTK_SEED is used when absent)")
      ->type_name("UINT");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Streams io{out, err};
  CLI::App app{"ktk: keygen, encryption and structural attack experiments", "ktk"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  KeygenArgs kg;
  auto* keygen_cmd = app.add_subcommand("keygen", "generate a key bundle directory");
  keygen_cmd->add_option("--n", kg.params.n, "code length")->required();
  keygen_cmd->add_option("--k", kg.params.k, "code dimension")->required();
  keygen_cmd->add_option("--d", kg.params.d, "designed minimum distance")->required();
  keygen_cmd->add_option("--t", kg.params.t, "error weight")->required();
  keygen_cmd->add_option("--rd", kg.params.r_D, "number of ones in D")->required();
  keygen_cmd->add_option("--a", kg.params.a, "slack in r_D + 2t + a = d")->required();
  keygen_cmd->add_option("--variant", kg.variant)->check(CLI::IsMember({"base", "masked", "concatenated"}));
  keygen_cmd->add_option("--mask", kg.mask)->check(CLI::IsMember({"permutation", "general"}));
  keygen_cmd->add_option("--code", kg.code, "random (rejection sampled) or bch")
      ->check(CLI::IsMember({"random", "bch"}));
  keygen_cmd->add_option("--max-rejections", kg.max_rejections);
  keygen_cmd->add_option("--out", kg.out_dir, "bundle directory")->required();
  keygen_cmd->add_option("--manifest", kg.manifest, "also write the manifest here");
  add_seed(keygen_cmd, kg.seed);

  EncryptArgs enc;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt a message with a public bundle");
  encrypt_cmd->add_option("--key", enc.key, "bundle directory")->required();
  encrypt_cmd->add_option("--msg", enc.msg, "message hex, ceil(k/8) bytes, LSB first")->required();
  encrypt_cmd->add_option("--out", enc.out, "ciphertext .gf2m")->required();
  encrypt_cmd->add_option("--manifest", enc.manifest);
  add_seed(encrypt_cmd, enc.seed);

  DecryptArgs dec;
  auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt with a full bundle; prints message hex");
  decrypt_cmd->add_option("--key", dec.key)->required();
  decrypt_cmd->add_option("--ct", dec.ct)->required();

  AttackArgs atk;
  auto* attack_cmd = app.add_subcommand("attack", "structural attack on a public bundle");
  attack_cmd->add_option("--key", atk.key, "bundle directory (public part is enough)")->required();
  attack_cmd->add_option("--ct", atk.ct, "ciphertext .gf2m");
  attack_cmd->add_option("--stage", atk.stage)->check(CLI::IsMember({"recover-perm", "isd", "full"}));
  attack_cmd->add_option("--alg", atk.alg)->check(CLI::IsMember({"prange", "leebrickell"}));
  attack_cmd->add_option("--p", atk.p, "Lee-Brickell enumeration weight");
  attack_cmd->add_option("--budget", atk.budget, "permutation-recovery trials (0: 4 n 2^r_D)");
  attack_cmd->add_option("--isd-budget", atk.isd_budget, "maximum ISD iterations");
  attack_cmd->add_option("--confidence", atk.confidence, "stop ISD once this success probability is reached")
      ->check(CLI::Range(0.0, 1.0));
  attack_cmd->add_option("--threads", atk.threads)->check(CLI::Range(1U, 1024U));
  attack_cmd->add_option("--perm", atk.perm_in, "permutation .perm for stage isd");
  attack_cmd->add_option("--perm-out", atk.perm_out, "write the recovered permutation here");
  attack_cmd->add_option("--out", atk.out, "also write the report here");
  attack_cmd->add_option("--manifest", atk.manifest);
  attack_cmd->add_flag("--quiet", atk.quiet, "no progress lines");
  add_seed(attack_cmd, atk.seed);

  EstimateArgs est;
  std::string est_kind;
  auto* estimate_cmd = app.add_subcommand("estimate", "closed-form workfactor estimates");
  estimate_cmd->require_subcommand(1);
  auto* perm_work = estimate_cmd->add_subcommand("perm-work", "log2 of 2n 2^r_D");
  perm_work->add_option("--n", est.n)->required();
  perm_work->add_option("--rd", est.rd)->required();
  auto* naive = estimate_cmd->add_subcommand("naive", "n / 20");
  naive->add_option("--n", est.n)->required();
  auto* isd_success = estimate_cmd->add_subcommand("isd-success", "per-iteration ISD success");
  isd_success->add_option("--n", est.n)->required();
  isd_success->add_option("--k", est.k)->required();
  isd_success->add_option("--t", est.t)->required();
  isd_success->add_option("--l", est.l);
  isd_success->add_option("--p", est.p);
  auto* ratio = estimate_cmd->add_subcommand("ratio", "log2 P(ktk) / P(McEliece)");
  ratio->add_option("--n", est.n)->required();
  ratio->add_option("--k", est.k)->required();
  ratio->add_option("--t", est.t)->required();
  ratio->add_option("--rd", est.rd)->required();
  ratio->add_option("--mce-n", est.mce_n)->required();
  ratio->add_option("--mce-k", est.mce_k)->required();
  ratio->add_option("--mce-t", est.mce_t)->required();
  ratio->add_option("--l", est.l);
  ratio->add_option("--p", est.p);
  auto* binom = estimate_cmd->add_subcommand("binom", "log2 C(n, k)");
  binom->add_option("--n", est.n)->required();
  binom->add_option("--k", est.k)->required();
  auto* repeat = estimate_cmd->add_subcommand("repeat", "1 - (1 - q)^r");
  repeat->add_option("--q", est.q)->required()->check(CLI::Range(0.0, 1.0));
  repeat->add_option("--r", est.r)->required()->check(CLI::NonNegativeNumber);

  std::string gen_path;
  auto* mindist_cmd = app.add_subcommand("mindist", "brute-force minimum distance of a generator");
  mindist_cmd->add_option("--gen", gen_path, "generator .gf2m (k <= 24)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (keygen_cmd->parsed()) return cmd_keygen(kg, args, io);
    if (encrypt_cmd->parsed()) return cmd_encrypt(enc, args, io);
    if (decrypt_cmd->parsed()) return cmd_decrypt(dec, io);
    if (attack_cmd->parsed()) return cmd_attack(atk, args, io);
    if (mindist_cmd->parsed()) return cmd_mindist(gen_path, io);
    for (auto* sub : estimate_cmd->get_subcommands()) {
      if (sub->parsed()) return cmd_estimate(sub->get_name(), est, io);
    }
  } catch (const ParamError& e) {
    error_object(err, "param", e.what(), {{"constraint", e.constraint()}});
    return kUsage;
  } catch (const FormatError& e) {
    error_object(err, "format", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    error_object(err, "domain", e.what());
    return kUsage;
  } catch (const BudgetExceeded& e) {
    error_object(err, "budget", e.what());
    return kBudget;
  } catch (const DecryptError& e) {
    static constexpr const char* kinds[] = {"decode", "weight", "inconsistent"};
    error_object(err, "decrypt", e.what(), {{"kind", kinds[static_cast<int>(e.kind())]}});
    return kDecrypt;
  } catch (const fs::filesystem_error& e) {
    error_object(err, "format", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    error_object(err, "internal", e.what());
    return kInternal;
  }
  return kUsage;
}

}  // namespace ktk::cli
