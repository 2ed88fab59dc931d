#include "ktk/report.hpp"

#include <cmath>

#include "ktk/key_bundle.hpp"

namespace ktk::io {

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j{{"command", m.command},
                   {"argv", m.argv},
                   {"master_seed", m.master_seed},
                   {"artifacts", m.artifacts},
                   {"tool_version", m.tool_version}};
  j["params"] = m.params ? params_to_json(*m.params) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const attack::AttackReport& r) {
  nlohmann::json j;
  j["status"] = std::string(attack::to_string(r.status));
  j["stage"] = r.stage;
  if (r.recovered_perm) {
    j["recovered_perm"] = std::vector<std::uint32_t>(r.recovered_perm->image().begin(), r.recovered_perm->image().end());
  } else {
    j["recovered_perm"] = nullptr;
  }
  j["perm_samples_used"] = r.perm_samples_used;
  j["perm_accepted"] = r.perm_accepted;
  j["isd_iterations"] = r.isd_iterations;
  j["e_found"] = r.e_found ? nlohmann::json(to_hex(*r.e_found)) : nlohmann::json(nullptr);
  j["m_found"] = r.m_found ? nlohmann::json(to_hex(*r.m_found)) : nlohmann::json(nullptr);
  j["verified"] = r.verified;
  j["wall_time"] = r.wall_time;
  return j;
}

nlohmann::json to_json(const attack::ProgressEvent& e) {
  return {{"stage", e.stage},
          {"trial", e.trial},
          {"accepted", e.accepted},
          {"resolved_positions", e.resolved_positions},
          {"iterations", e.iterations},
          {"log2_work_observed", e.log2_work_observed},
          {"verified", e.verified}};
}

nlohmann::json to_json(const workfactor::Estimate& e) {
  const auto& in = e.inputs;
  nlohmann::json j{{"formula_id", e.formula_id},
                   {"inputs", {{"n", in.n}, {"k", in.k}, {"d", in.d}, {"t", in.t}, {"r_D", in.r_D}, {"l", in.l}, {"p", in.p}}}};
  j["log2_value"] = std::isfinite(e.log2_value) ? nlohmann::json(e.log2_value) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ktk::io
