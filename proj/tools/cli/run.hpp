#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hofa::cli {

using nlohmann::json;

inline constexpr const char* kConfigSchema = "hofa.config/1";
inline constexpr const char* kResultSchema = "hofa.result/1";

std::string library_version();
const std::vector<std::string>& command_names();

/// Command-line overrides; each replaces the matching config key.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cap;
  std::optional<double> tolerance;
};

struct CsvRow {
  std::string instance;
  std::string kind;
  int k = 0;
  double value = 0;
  double runtime_ms = 0;
};

struct RunResult {
  json record;
  std::vector<CsvRow> rows;
  /// False when the command's own check failed (exit code 4).
  bool postcondition_ok = true;
};

/// Config with overrides applied and defaults filled in; throws ValidationError.
json normalize_config(json config, const RunOptions& opts);

/// FNV-1a over the canonical dump of a normalized config.
std::string config_digest(const json& normalized);

RunResult run(const json& config, const RunOptions& opts = {});

/// 0 ok, 2 validation, 3 cost cap, 4 hypothesis or invariant failure.
int exit_code_for(const std::exception& e);
json error_record(const json& config, const std::exception& e);

std::string csv_text(const std::vector<CsvRow>& rows);
/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

json load_json_file(const std::string& path);

}  // namespace hofa::cli
