#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hofa::cli {

using nlohmann::json;

inline constexpr const char* kGoldenSchema = "hofa.golden/1";

struct GoldenReport {
  std::string name;
  bool passed = false;
  std::vector<std::string> diffs;
  double runtime_ms = 0;
};

/// Runs every case (or the one named `only`) and compares the pinned
/// output fields.  Each case is {"name", "config", "expect"}, where
/// "expect" maps JSON pointers into the result record to golden values;
/// numbers compare within the case tolerance (default 1e-9).
std::vector<GoldenReport> run_golden(const json& golden, const std::optional<std::string>& only = std::nullopt);

}  // namespace hofa::cli
