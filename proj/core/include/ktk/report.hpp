#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ktk/attack.hpp"
#include "ktk/scheme.hpp"
#include "ktk/workfactor.hpp"

namespace ktk::io {

/// What a CLI run did and what it wrote; rerunning it must reproduce the
/// artifacts bit for bit.
struct RunManifest {
  std::string command;
  /// Arguments that replay the run (seed made explicit).
  std::vector<std::string> argv;
  std::optional<SchemeParams> params;
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> artifacts;
  std::string tool_version;
};

nlohmann::json to_json(const RunManifest& m);
/// Vectors are hex (LSB-first), the permutation an image array; absent
/// values are null.
nlohmann::json to_json(const attack::AttackReport& r);
nlohmann::json to_json(const attack::ProgressEvent& e);
/// log2_value is null when the estimated quantity is zero.
nlohmann::json to_json(const workfactor::Estimate& e);

}  // namespace ktk::io
