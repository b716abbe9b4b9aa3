#include "golden.hpp"

#include <chrono>
#include <cmath>

#include "hofa/errors.hpp"
#include "run.hpp"

namespace hofa::cli {

namespace {

void compare(const json& got, const json& want, const std::string& path, double tol, std::vector<std::string>& diffs) {
  if (want.is_number() && got.is_number()) {
    const double g = got.get<double>(), w = want.get<double>();
    if (!(std::abs(g - w) <= tol)) diffs.push_back(path + ": got " + got.dump() + ", expected " + want.dump());
    return;
  }
  if (want.is_array() && got.is_array() && want.size() == got.size()) {
    for (std::size_t i = 0; i < want.size(); ++i) compare(got[i], want[i], path + "/" + std::to_string(i), tol, diffs);
    return;
  }
  if (want.is_object() && got.is_object() && want.size() == got.size()) {
    for (const auto& [k, v] : want.items()) {
      if (!got.contains(k)) {
        diffs.push_back(path + "/" + k + ": missing");
      } else {
        compare(got[k], v, path + "/" + k, tol, diffs);
      }
    }
    return;
  }
  if (got != want) diffs.push_back(path + ": got " + got.dump() + ", expected " + want.dump());
}

}  // namespace

std::vector<GoldenReport> run_golden(const json& golden, const std::optional<std::string>& only) {
  if (!golden.is_object() || golden.value("schema", std::string()) != kGoldenSchema) {
    throw ValidationError(std::string("golden file schema must be \"") + kGoldenSchema + "\"");
  }
  std::vector<GoldenReport> out;
  for (const auto& c : golden.at("cases")) {
    const std::string name = c.at("name").get<std::string>();
    if (only && *only != name) continue;
    GoldenReport rep{name, false, {}, 0};
    const double tol = c.value("tolerance", 1e-9);
    const auto t0 = std::chrono::steady_clock::now();
    json record;
    try {
      record = run(c.at("config")).record;
    } catch (const std::exception& e) {
      record = error_record(c.at("config"), e);
    }
    rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& [ptr, want] : c.at("expect").items()) {
      const json::json_pointer p(ptr);
      if (!record.contains(p)) {
        rep.diffs.push_back(ptr + ": missing from record");
      } else {
        compare(record.at(p), want, ptr, tol, rep.diffs);
      }
    }
    rep.passed = rep.diffs.empty();
    out.push_back(std::move(rep));
  }
  if (only && out.empty()) throw ValidationError("no golden case named '" + *only + "'");
  return out;
}

}  // namespace hofa::cli
