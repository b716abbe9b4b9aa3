#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/golden.hpp"
#include "cli/run.hpp"
#include "cli/serialize.hpp"
#include "hofa/errors.hpp"

using namespace hofa;
using namespace hofa::cli;

namespace {

json cfg(const std::string& command, json body) {
  body["schema"] = kConfigSchema;
  body["command"] = command;
  return body;
}

json strip_runtime(json rec) {
  rec.erase("runtime_ms");
  return rec;
}

int exit_of(const json& config, const RunOptions& opts = {}) {
  try {
    return run(config, opts).postcondition_ok ? 0 : 4;
  } catch (const std::exception& e) {
    return exit_code_for(e);
  }
}

const json kCocycle{{"y1", {{2, 1}}}, {"y2", {{3, 1}}}, {"codomain", {3}}, {"dimension", 2}};

// One working config per subcommand.
std::map<std::string, json> sample_configs() {
  return {
      {"norm", cfg("norm", {{"function", {{"kind", "bilinear"}, {"l", 1}}}, {"order", {2, 3}}})},
      {"boxnorm", cfg("boxnorm", {{"function", {{"kind", "bilinear"}, {"l", 2}}}})},
      {"cutnorm", cfg("cutnorm", {{"function", {{"kind", "random_sign"}, {"group", {2, 2, 2}}}},
                                  {"blocks", {1, 1, 1}}, {"d", 1}, {"seed", 5}})},
      {"complement", cfg("complement", {{"group", {3, 27}}, {"generators", {{1, 3}}}})},
      {"shrink", cfg("shrink", {{"group", {3, 27}}, {"generators", {{1, 0}, {0, 3}}}})},
      {"crosssection", cfg("crosssection", {{"tau", {{"domain", {9}}, {"codomain", {3}}, {"matrix", {{1}}}}}})},
      {"decompose", cfg("decompose", {{"tau", {{"domain", {3, 27}}, {"codomain", {3, 9}}, {"matrix", {{1, 0}, {0, 1}}}}}})},
      {"degree", cfg("degree", {{"map", {{"domain", {3}}, {"codomain", {3}}, {"values", {0, 1, 2}}}}})},
      {"project", cfg("project", {{"phi", {{"domain", {4}}, {"codomain", {4}}, {"values", {0, 1, 2, 3}}}},
                                  {"tau", {{"domain", {4}}, {"codomain", {2}}, {"matrix", {{1}}}}}})},
      {"obstruct", cfg("obstruct", {{"function", {{"kind", "random_disk"}, {"group", {4}}}},
                                    {"phi", {{"domain", {4}}, {"codomain", {4}}, {"values", {0, 1, 2, 3}}}},
                                    {"tau", {{"domain", {4}}, {"codomain", {4}}, {"matrix", {{1}}}}},
                                    {"k", 1},
                                    {"seed", 9}})},
      {"avg-split", cfg("avg-split", {{"cocycle", kCocycle}, {"seed", 3}})},
      {"cocycle-split", cfg("cocycle-split", {{"cocycle", kCocycle}, {"seed", 4}})},
      {"morphisms", cfg("morphisms", {{"x", {{2, 1}}}, {"y", {{3, 1}}}})},
  };
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hofa_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Serialize, GroupAndElementRoundTrip) {
  const FinAbGroup g = group_from_json(json{3, 27}, "g");
  EXPECT_EQ(to_json(g), (json{3, 27}));
  EXPECT_EQ(element_from_json(json{4, -1}, g, "x"), (Element{1, 26}));
  EXPECT_THROW(group_from_json(json{0}, "g"), ValidationError);
  EXPECT_THROW(element_from_json(json{1}, g, "x"), ValidationError);
}

TEST(Serialize, HomomorphismRoundTrip) {
  const json j{{"domain", {6}}, {"codomain", {3}}, {"matrix", {{1}}}};
  const Homomorphism h = hom_from_json(j, "tau");
  const Homomorphism back = hom_from_json(to_json(h), "tau");
  for (Code x = 0; x < 6; ++x) EXPECT_EQ(back.apply_code(x), h.apply_code(x));
}

TEST(Serialize, PolymapSources) {
  const SourceContext ctx{};
  const PolyMap t = polymap_from_json(json{{"domain", {3}}, {"codomain", {6}}, {"values", {0, 1, 5}}}, ctx, "m");
  EXPECT_EQ(to_json(degree(t)), json("NotPolynomial"));
  const PolyMap back = polymap_from_json(to_json(t), ctx, "m");
  EXPECT_EQ(back.values(), t.values());

  const json poly{{"kind", "polynomial"}, {"domain", {5}}, {"modulus", 5}, {"basis", "power"},
                  {"terms", {{{"coef", 1}, {"powers", {2}}}}}};
  EXPECT_EQ(to_json(degree(polymap_from_json(poly, ctx, "m"))), json(2));
  EXPECT_THROW(polymap_from_json(json{{"kind", "random"}, {"domain", {4}}, {"degree", 2}}, ctx, "m"), ValidationError);
}

TEST(Serialize, CocycleRoundTrip) {
  std::mt19937_64 rng(41);
  const SourceContext ctx{&rng};
  const CocycleInstance in = cocycle_from_json(kCocycle, ctx, "c");
  json table = kCocycle;
  table["kind"] = "table";
  table["table"] = to_json(in.rho);
  const CocycleInstance back = cocycle_from_json(table, SourceContext{}, "c");
  EXPECT_EQ(back.rho.table, in.rho.table);
}

TEST(Run, EverySubcommandRuns) {
  const auto configs = sample_configs();
  EXPECT_EQ(configs.size(), command_names().size());
  for (const auto& name : command_names()) {
    ASSERT_TRUE(configs.count(name)) << name;
    const RunResult r = run(configs.at(name));
    EXPECT_EQ(r.record["schema"], kResultSchema) << name;
    EXPECT_EQ(r.record["command"], name);
    EXPECT_TRUE(r.record.contains("outputs")) << name;
    EXPECT_EQ(r.record["status"], "ok") << name;
    EXPECT_TRUE(r.postcondition_ok) << name;
  }
}

TEST(Run, DeterministicApartFromRuntime) {
  for (const auto& [name, c] : sample_configs()) {
    EXPECT_EQ(strip_runtime(run(c).record), strip_runtime(run(c).record)) << name;
  }
}

TEST(Run, SeedOverrideChangesRandomInputs) {
  const json c = sample_configs().at("cocycle-split");
  const json a = run(c).record, b = run(c, RunOptions{std::uint64_t{99}, {}, {}}).record;
  EXPECT_NE(a["inputs"]["rho"], b["inputs"]["rho"]);
  EXPECT_EQ(b["config"]["seed"], 99);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(exit_of(cfg("norm", {{"function", {{"kind", "bilinear"}, {"l", 1}}}, {"order", 2}, {"bogus", 1}})), 2);
  EXPECT_EQ(exit_of(json{{"schema", "other"}, {"command", "norm"}}), 2);
  EXPECT_EQ(exit_of(cfg("nope", json::object())), 2);
  // random sources need a seed
  json unseeded = sample_configs().at("avg-split");
  unseeded.erase("seed");
  EXPECT_EQ(exit_of(unseeded), 2);
  // cost cap
  EXPECT_EQ(exit_of(sample_configs().at("morphisms"), RunOptions{{}, std::uint64_t{2}, {}}), 3);
  // non-coprime averaging
  json nc = cfg("cocycle-split", {{"cocycle", {{"y1", {{3, 1}}}, {"y2", {{3, 1}}}, {"codomain", {3}},
                                               {"dimension", 2}, {"kind", "zero"}}}});
  EXPECT_EQ(exit_of(nc), 4);
  // obstruction hypothesis: the phase of a degree-2 map does not fit k = 1
  json ob = sample_configs().at("obstruct");
  ob["phi"] = {{"kind", "polynomial"}, {"domain", {5}}, {"modulus", 5}, {"basis", "power"},
               {"terms", {{{"coef", 1}, {"powers", {2}}}}}};
  ob["tau"] = {{"domain", {5}}, {"codomain", {5}}, {"matrix", {{1}}}};
  ob["function"] = {{"kind", "constant"}, {"group", {5}}, {"value", 1}};
  EXPECT_EQ(exit_of(ob), 4);
}

TEST(Run, ErrorRecordShape) {
  const json bad = cfg("norm", {{"function", {{"kind", "bilinear"}, {"l", 0}}}, {"order", 2}});
  try {
    run(bad);
    FAIL() << "expected a validation error";
  } catch (const std::exception& e) {
    const json rec = error_record(bad, e);
    EXPECT_EQ(rec["status"], "error");
    EXPECT_EQ(rec["error"]["kind"], "validation");
    EXPECT_EQ(rec["command"], "norm");
  }
}

TEST(Run, DigestIsStable) {
  const json c = sample_configs().at("norm");
  const json n = normalize_config(c, {});
  EXPECT_EQ(config_digest(n), config_digest(normalize_config(c, {})));
  EXPECT_EQ(config_digest(n).size(), 16u);
  EXPECT_NE(config_digest(n), config_digest(normalize_config(c, RunOptions{std::uint64_t{1}, {}, {}})));
  EXPECT_EQ(run(c).record["id"], config_digest(n));
  EXPECT_EQ(n["cap"], kDefaultCostCap);
  EXPECT_EQ(n["tolerance"], 1e-9);
}

TEST(Run, CsvRows) {
  const RunResult r = run(sample_configs().at("norm"));
  ASSERT_EQ(r.rows.size(), 2u);
  const std::string text = csv_text(r.rows);
  EXPECT_EQ(text.rfind("instance,kind,k,value,runtime_ms\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Run, WriteAtomic) {
  const auto p = temp_path("atomic.json");
  write_atomic(p.string(), "first");
  write_atomic(p.string(), "{\"a\": 1}");
  EXPECT_EQ(load_json_file(p.string()), (json{{"a", 1}}));
  for (const auto& e : std::filesystem::directory_iterator(p.parent_path())) {
    EXPECT_EQ(e.path().string().find(p.filename().string() + "."), std::string::npos) << e.path();
  }
  std::filesystem::remove(p);
  EXPECT_THROW(load_json_file(p.string()), ValidationError);
}

TEST(Golden, PinnedCasesPass) {
  const json golden = load_json_file(HOFA_GOLDEN_DEFAULT);
  const auto reports = run_golden(golden);
  EXPECT_EQ(reports.size(), golden["cases"].size());
  for (const auto& r : reports) EXPECT_TRUE(r.passed) << r.name << ": " << (r.diffs.empty() ? "" : r.diffs[0]);
}

TEST(Golden, TamperedValueFailsWithDiff) {
  json golden = load_json_file(HOFA_GOLDEN_DEFAULT);
  const std::string name = golden["cases"][0]["name"];
  golden["cases"][0]["expect"]["/outputs/hull/subgroup/order"] = 27;
  const auto reports = run_golden(golden, name);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_FALSE(reports[0].passed);
  ASSERT_FALSE(reports[0].diffs.empty());
  EXPECT_NE(reports[0].diffs[0].find("/outputs/hull/subgroup/order"), std::string::npos);
  EXPECT_THROW(run_golden(golden, std::string("no_such_case")), ValidationError);
}
