#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ktk/errors.hpp"
#include "ktk/key_bundle.hpp"
#include "ktk/report.hpp"

using namespace ktk;

TEST(Report, AttackReportJson) {
  attack::AttackReport r;
  r.status = attack::AttackStatus::Verified;
  r.stage = "message_recovery";
  r.recovered_perm = Permutation({2, 0, 1});
  r.e_found = BitVector::from_string("1000000001");
  r.verified = true;
  const auto j = io::to_json(r);
  EXPECT_EQ(j["status"], "verified");
  EXPECT_EQ(j["recovered_perm"], (nlohmann::json{2, 0, 1}));
  EXPECT_EQ(j["e_found"], "0102");
  EXPECT_TRUE(j["m_found"].is_null());
  EXPECT_TRUE(j["verified"].get<bool>());
  EXPECT_TRUE(io::to_json(attack::AttackReport{})["recovered_perm"].is_null());
}

TEST(Report, EstimateJson) {
  const auto j = io::to_json(workfactor::perm_recovery_work(1023, 33));
  EXPECT_EQ(j["formula_id"], "perm_recovery_work");
  EXPECT_EQ(j["inputs"]["n"], 1023);
  EXPECT_NEAR(j["log2_value"].get<double>(), 44.0, 0.01);

  workfactor::Estimate zero;
  zero.log2_value = -std::numeric_limits<double>::infinity();
  EXPECT_TRUE(zero.is_zero());
  EXPECT_TRUE(io::to_json(zero)["log2_value"].is_null());
}

TEST(Report, ManifestJson) {
  io::RunManifest m;
  m.command = "keygen";
  m.argv = {"keygen", "--seed", "7"};
  m.params = SchemeParams{15, 5, 7, 2, 2, 1, Variant::Base};
  m.master_seed = 7;
  m.artifacts["bundle"] = "out";
  const auto j = io::to_json(m);
  EXPECT_EQ(j["argv"].size(), 3U);
  EXPECT_EQ(j["master_seed"], 7);
  EXPECT_EQ(io::params_from_json(j["params"]), *m.params);
  EXPECT_TRUE(io::to_json(io::RunManifest{})["params"].is_null());
}

TEST(Report, ParamsJsonRejectsMissingFields) {
  auto j = io::params_to_json({15, 5, 7, 2, 2, 1, Variant::Concatenated});
  EXPECT_EQ(j["variant"], "concatenated");
  j.erase("t");
  try {
    io::params_from_json(j);
    FAIL();
  } catch (const ParamError& e) {
    EXPECT_EQ(e.constraint(), "t");
  }
}
