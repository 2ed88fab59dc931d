#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "ktk/gf2_io.hpp"
#include "ktk/key_bundle.hpp"
#include "ktk/linear_code.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ktk;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json out_json() const { return json::parse(out); }
  json last_err_json() const {
    std::istringstream lines(err);
    std::string line, last;
    while (std::getline(lines, line))
      if (!line.empty()) last = line;
    return json::parse(last);
  }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("KTK_SEED");
    dir_ = fs::temp_directory_path() /
           ("ktk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv("KTK_SEED");
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string keygen(const std::string& name, std::uint64_t seed, const std::string& variant = "base") {
    const auto r = run({"keygen", "--n", "15", "--k", "5", "--d", "7", "--t", "2", "--rd", "2", "--a", "1",
                        "--variant", variant, "--seed", std::to_string(seed), "--out", path(name)});
    EXPECT_EQ(r.code, 0) << r.err;
    return path(name);
  }

  std::string encrypt(const std::string& key, const std::string& msg, std::uint64_t seed, const std::string& name) {
    const auto r = run({"encrypt", "--key", key, "--msg", msg, "--seed", std::to_string(seed), "--out", path(name)});
    EXPECT_EQ(r.code, 0) << r.err;
    return path(name);
  }

  fs::path dir_;
};

std::vector<std::uint8_t> bytes(const fs::path& p) { return io::read_file(p); }

}  // namespace

TEST_F(Cli, KeygenWritesAValidBundle) {
  const auto r = run({"keygen", "--n", "15", "--k", "5", "--d", "7", "--t", "2", "--rd", "2", "--a", "1",
                      "--variant", "base", "--seed", "7", "--out", path("key")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = r.out_json();
  EXPECT_EQ(manifest["command"], "keygen");
  EXPECT_EQ(manifest["master_seed"], 7);
  EXPECT_EQ(manifest["params"]["r_D"], 2);

  const auto kp = io::read_bundle(path("key"));
  EXPECT_EQ(kp.seed, 7U);
  EXPECT_GE(kp.priv.code.d, 7U);
  EXPECT_EQ(min_distance_bruteforce(kp.priv.code), kp.priv.code.d);
  EXPECT_EQ(kp.pub.E_pub, (kp.priv.W * kp.priv.D.as_matrix() * (kp.priv.U * kp.priv.code.G + kp.priv.P1.as_matrix()) +
                           kp.priv.P2.as_matrix()) *
                              kp.priv.mask_matrix());
}

TEST_F(Cli, UsageErrors) {
  auto r = run({"keygen", "--n", "15", "--k", "5", "--t", "2", "--rd", "2", "--a", "1", "--out", path("key")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--d"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"keygen", "--n", "x"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST_F(Cli, ParamErrorNamesTheConstraint) {
  const auto r = run({"keygen", "--n", "15", "--k", "5", "--d", "7", "--t", "3", "--rd", "2", "--a", "1", "--seed",
                      "1", "--out", path("key")});
  EXPECT_EQ(r.code, 2);
  const auto e = r.last_err_json();
  EXPECT_EQ(e["error"], "param");
  EXPECT_EQ(e["constraint"], "equation");
}

TEST_F(Cli, BudgetExceeded) {
  const auto r = run({"keygen", "--n", "31", "--k", "16", "--d", "7", "--t", "2", "--rd", "2", "--a", "1", "--seed",
                      "1", "--max-rejections", "1", "--out", path("key")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.last_err_json()["error"], "budget");

  io::write_matrix(path("big.gf2m"), BitMatrix(25, 30));
  EXPECT_EQ(run({"mindist", "--gen", path("big.gf2m")}).code, 3);
}

TEST_F(Cli, EncryptDecryptRoundtrip) {
  const auto key = keygen("key", 11);
  for (const std::string msg : {"00", "1a", "1f", "15"}) {
    const auto ct = encrypt(key, msg, 3, "ct.gf2m");
    const auto r = run({"decrypt", "--key", key, "--ct", ct});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, msg + "\n");
  }
  // Bits past k in the message hex are refused.
  EXPECT_EQ(run({"encrypt", "--key", key, "--msg", "ff", "--seed", "1", "--out", path("x")}).code, 2);
}

TEST_F(Cli, TruncatedCiphertextIsAFormatError) {
  const auto key = keygen("key", 12);
  const auto ct = encrypt(key, "1a", 4, "ct.gf2m");
  auto b = bytes(ct);
  b.pop_back();
  io::write_file(path("short.gf2m"), b);
  const auto r = run({"decrypt", "--key", key, "--ct", path("short.gf2m")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.last_err_json()["error"], "format");
  EXPECT_EQ(run({"decrypt", "--key", path("missing"), "--ct", ct}).code, 2);
}

TEST_F(Cli, WrongBundleIsADecryptError) {
  const auto key_a = keygen("a", 13);
  int refused = 0;
  // About 90% of foreign ciphertexts are refused; the rest decode to some other message.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto key_b = keygen("b" + std::to_string(seed), 100 + seed);
    const auto ct = encrypt(key_b, "1a", seed, "ct.gf2m");
    const auto r = run({"decrypt", "--key", key_a, "--ct", ct});
    if (r.code == 4) {
      ++refused;
      const auto e = r.last_err_json();
      EXPECT_EQ(e["error"], "decrypt");
      EXPECT_TRUE(e["kind"] == "decode" || e["kind"] == "weight" || e["kind"] == "inconsistent");
    }
  }
  EXPECT_GE(refused, 30);
}

TEST_F(Cli, FullAttackRecoversTheMessage) {
  const auto key = keygen("key", 14);
  const auto ct = encrypt(key, "1a", 5, "ct.gf2m");
  const auto r = run({"attack", "--key", key, "--ct", ct, "--seed", "5", "--out", path("report.json")});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto report = r.out_json();
  EXPECT_TRUE(report["verified"].get<bool>());
  EXPECT_EQ(report["m_found"], "1a");
  EXPECT_EQ(report, io::read_json(path("report.json")));
  std::istringstream lines(r.err);
  std::string line;
  int events = 0;
  while (std::getline(lines, line)) {
    const auto e = json::parse(line);
    for (const char* key : {"stage", "trial", "accepted", "resolved_positions", "iterations", "log2_work_observed",
                            "verified"})
      EXPECT_TRUE(e.contains(key)) << line;
    ++events;
  }
  EXPECT_GT(events, 0);
  EXPECT_TRUE(run({"attack", "--key", key, "--ct", ct, "--seed", "5", "--quiet"}).err.empty());
}

TEST_F(Cli, RecoverPermStageMatchesPrivateKey) {
  const auto key = keygen("key", 15);
  const auto r = run({"attack", "--key", key, "--stage", "recover-perm", "--seed", "1", "--perm-out", path("p.perm")});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto kp = io::read_bundle(key);
  EXPECT_EQ(io::read_permutation(path("p.perm")), kp.priv.composite_permutation());

  const auto ct = encrypt(key, "0b", 6, "ct.gf2m");
  const auto isd = run({"attack", "--key", key, "--ct", ct, "--stage", "isd", "--perm", path("p.perm"), "--alg",
                        "leebrickell", "--p", "1", "--seed", "2"});
  EXPECT_EQ(isd.code, 0);
  EXPECT_EQ(isd.out_json()["m_found"], "0b");
  EXPECT_EQ(run({"attack", "--key", key, "--ct", ct, "--stage", "isd", "--seed", "2"}).code, 2);
  EXPECT_EQ(run({"attack", "--key", key, "--ct", ct, "--alg", "leebrickell", "--p", "3", "--seed", "2"}).code, 2);
}

TEST_F(Cli, MaskedBundleResists) {
  const auto key = keygen("key", 16, "masked");
  const auto ct = encrypt(key, "1a", 7, "ct.gf2m");
  const auto r = run({"attack", "--key", key, "--ct", ct, "--seed", "3", "--quiet"});
  EXPECT_EQ(r.code, 5);
  const auto report = r.out_json();
  EXPECT_FALSE(report["verified"].get<bool>());
  EXPECT_EQ(report["stage"], "recover_permutation");
}

TEST_F(Cli, Estimates) {
  auto r = run({"estimate", "perm-work", "--n", "1023", "--rd", "33"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.out_json()["log2_value"].get<double>(), 44.0, 0.01);
  EXPECT_DOUBLE_EQ(run({"estimate", "naive", "--n", "1800"}).out_json()["log2_value"].get<double>(), 90.0);
  EXPECT_EQ(run({"estimate", "repeat", "--q", "0.6", "--r", "2"}).out_json()["value"].get<double>(), 0.84);
  EXPECT_NEAR(run({"estimate", "isd-success", "--n", "10", "--k", "5", "--t", "1"})
                  .out_json()["log2_value"]
                  .get<double>(),
              -1.0, 1e-12);
  const auto ratio = run({"estimate", "ratio", "--n", "1023", "--k", "490", "--t", "33", "--rd", "33", "--mce-n",
                          "1024", "--mce-k", "524", "--mce-t", "50", "--l", "10", "--p", "4"});
  ASSERT_EQ(ratio.code, 0);
  EXPECT_NEAR(ratio.out_json()["log2_value"].get<double>(), 16.55, 0.01);
  EXPECT_TRUE(run({"estimate", "isd-success", "--n", "10", "--k", "8", "--t", "3"}).out_json()["log2_value"].is_null());
  r = run({"estimate", "binom", "--n", "4", "--k", "9"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.last_err_json()["error"], "domain");
}

TEST_F(Cli, Mindist) {
  const auto bch = *bch_code(15, 5);
  io::write_matrix(path("g.gf2m"), bch.G);
  const auto r = run({"mindist", "--gen", path("g.gf2m")});
  ASSERT_EQ(r.code, 0);
  const auto j = r.out_json();
  EXPECT_EQ(j["d_min"], 7);
  EXPECT_EQ(j["witness_weight"], 7);
  const auto w = from_hex(j["witness_codeword"].get<std::string>(), 15);
  EXPECT_EQ(w.weight(), 7U);
  EXPECT_NO_THROW(solve_left(bch.G, w));
}

TEST_F(Cli, InternalErrorOnBrokenOutput) {
  std::ostringstream err;
  struct Broken : std::streambuf {
    int overflow(int) override { return traits_type::eof(); }
  } sink;
  std::ostream broken(&sink);
  broken.exceptions(std::ios::badbit);
  const int code = cli::run({"estimate", "naive", "--n", "20"}, broken, err);
  EXPECT_EQ(code, 1);
  EXPECT_EQ(json::parse(err.str())["error"], "internal");
}

TEST_F(Cli, SeedPrecedence) {
  const auto args = [&](const std::string& out) {
    return std::vector<std::string>{"keygen", "--n", "15", "--k", "5", "--d", "7", "--t", "2",
                                    "--rd", "2", "--a", "1", "--out", path(out)};
  };
  setenv("KTK_SEED", "99", 1);
  const auto env = run(args("env"));
  ASSERT_EQ(env.code, 0);
  EXPECT_EQ(env.out_json()["master_seed"], 99);
  EXPECT_EQ(bytes(path("env") + "/pub_E.gf2m"), bytes(keygen("flag", 99) + "/pub_E.gf2m"));

  auto with_flag = args("both");
  with_flag.insert(with_flag.end(), {"--seed", "5"});
  EXPECT_EQ(run(with_flag).out_json()["master_seed"], 5);

  setenv("KTK_SEED", "banana", 1);
  EXPECT_EQ(run(args("bad")).code, 2);
  unsetenv("KTK_SEED");

  const auto fresh = run(args("fresh"));
  ASSERT_EQ(fresh.code, 0);
  const auto argv = fresh.out_json()["argv"].get<std::vector<std::string>>();
  const auto it = std::find(argv.begin(), argv.end(), "--seed");
  ASSERT_NE(it, argv.end());
  EXPECT_EQ(std::stoull(*(it + 1)), fresh.out_json()["master_seed"].get<std::uint64_t>());
}

TEST_F(Cli, ManifestReplayIsBitIdentical) {
  const auto r = run({"keygen", "--n", "15", "--k", "5", "--d", "7", "--t", "2", "--rd", "2", "--a", "1", "--out",
                      path("key"), "--manifest", path("keygen.json")});
  ASSERT_EQ(r.code, 0);
  const auto first = bytes(path("key") + "/pub_E.gf2m");
  const auto priv = bytes(path("key") + "/priv_W.gf2m");
  fs::remove_all(path("key"));
  const auto argv = io::read_json(path("keygen.json"))["argv"].get<std::vector<std::string>>();
  ASSERT_EQ(run(argv).code, 0);
  EXPECT_EQ(bytes(path("key") + "/pub_E.gf2m"), first);
  EXPECT_EQ(bytes(path("key") + "/priv_W.gf2m"), priv);

  const auto attack = [&](const std::string& threads) {
    const auto ct = encrypt(path("key"), "13", 8, "ct.gf2m");
    auto out = run({"attack", "--key", path("key"), "--ct", ct, "--seed", "9", "--threads", threads, "--quiet"});
    auto j = out.out_json();
    j.erase("wall_time");
    return j;
  };
  EXPECT_EQ(attack("1"), attack("4"));
}
