#include "run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "serialize.hpp"

#ifndef HOFA_VERSION
#define HOFA_VERSION "0.0.0"
#endif

namespace hofa::cli {

namespace {

struct Context {
  const json& cfg;
  std::optional<std::mt19937_64> rng;
  std::uint64_t cap;
  double tolerance;
  std::string id;

  SourceContext sources() { return SourceContext{rng ? &*rng : nullptr, cap}; }
};

using Handler = std::function<RunResult(Context&)>;

struct Command {
  std::set<std::string> keys;
  Handler handler;
};

json degrees_json(const std::vector<Degree>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back(to_json(d));
  return out;
}

bool within(const Degree& d, int bound) { return d.polynomial && d.value <= bound; }

std::vector<int> orders_of(const json& j) {
  std::vector<int> out;
  if (j.is_number_integer()) {
    out.push_back(j.get<int>());
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number_integer()) throw ValidationError("order: expected integers");
      out.push_back(v.get<int>());
    }
  } else {
    throw ValidationError("order: integer or list of integers");
  }
  for (int k : out) {
    if (k < 1) throw ValidationError("order: U^k needs k >= 1");
  }
  return out;
}

Subgroup subgroup_of(const json& cfg) {
  const FinAbGroup a = group_from_json(field(cfg, "group", ""), "group");
  return Subgroup::generated(a, elements_from_json(field(cfg, "generators", ""), a, "generators"));
}

bool is_p_group(const FinAbGroup& a) { return a.is_trivial() || a.prime().has_value(); }

json complemented_json(const ComplementedSubgroup& c) {
  return {{"subgroup", to_json(c.subgroup)},
          {"complement", to_json(c.complement)},
          {"verified", is_complement(c.subgroup, c.complement)}};
}

json complex_table(const std::vector<Complex>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_json(z));
  return out;
}

RunResult cmd_norm(Context& c) {
  const GroupFunction f = function_from_json(field(c.cfg, "function", ""), c.sources(), "function");
  RunResult r;
  json norms = json::array();
  for (int k : orders_of(field(c.cfg, "order", ""))) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = gowers_norm(f, k, c.cap);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    json entry{{"order", k}, {"value", v}};
    if (f.is_exact() && f.modulus() <= 360) {
      const CyclotomicSum s = gowers_power_exact(f, k, c.cap);
      const double ev = gowers_norm_exact(f, k, c.cap);
      entry["exact_power_counts"] = s.counts();
      entry["exact_value"] = ev;
      const bool agree = std::abs(ev - v) <= c.tolerance;
      entry["agree"] = agree;
      r.postcondition_ok = r.postcondition_ok && agree;
    }
    norms.push_back(entry);
    r.rows.push_back({c.id, "gowers", k, v, ms});
  }
  r.record["outputs"] = {{"norms", norms}};
  r.record["inputs"] = {{"group", to_json(f.group())}, {"exact", f.is_exact()}};
  return r;
}

RunResult cmd_boxnorm(Context& c) {
  const GroupFunction f = function_from_json(field(c.cfg, "function", ""), c.sources(), "function");
  const auto split = static_cast<std::size_t>(int_field_or(c.cfg, "split", static_cast<std::int64_t>(f.group().num_factors() / 2), ""));
  const auto t0 = std::chrono::steady_clock::now();
  const double v = box_norm_4cycle(f, split);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  RunResult r;
  r.record["inputs"] = {{"group", to_json(f.group())}, {"split", split}};
  r.record["outputs"] = {{"value", v}};
  r.rows.push_back({c.id, "box4", 2, v, ms});
  return r;
}

RunResult cmd_cutnorm(Context& c) {
  const GroupFunction f = function_from_json(field(c.cfg, "function", ""), c.sources(), "function");
  std::vector<std::size_t> blocks;
  for (const auto& b : field(c.cfg, "blocks", "")) blocks.push_back(b.get<std::size_t>());
  const int d = static_cast<int>(int_field(c.cfg, "d", ""));
  CutNormOptions opts;
  opts.restarts = static_cast<int>(int_field_or(c.cfg, "restarts", opts.restarts, ""));
  opts.iterations = static_cast<int>(int_field_or(c.cfg, "iterations", opts.iterations, ""));
  if (opts.restarts > 0) {
    if (!c.cfg.contains("seed")) throw ValidationError("cutnorm: random restarts need a seed");
    opts.seed = c.cfg["seed"].get<std::uint64_t>();
  }
  const auto t0 = std::chrono::steady_clock::now();
  const CutNormResult res = cut_norm_lower(f, blocks, d, opts);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  RunResult r;
  json witnesses = json::array();
  bool bounded = true;
  for (const auto& u : res.witnesses) {
    witnesses.push_back(complex_table(u));
    for (const auto& z : u) bounded = bounded && std::abs(z) <= 1 + 1e-12;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < res.trace.size(); ++i) monotone = monotone && res.trace[i] + 1e-12 >= res.trace[i - 1];
  r.postcondition_ok = bounded && monotone;
  r.record["inputs"] = {{"group", to_json(f.group())}, {"blocks", blocks}, {"d", d},
                        {"restarts", opts.restarts}, {"iterations", opts.iterations}};
  r.record["outputs"] = {{"value", res.value}, {"subsets", res.subsets}, {"witnesses", witnesses},
                         {"trace", res.trace}, {"witness_one_bounded", bounded}, {"monotone", monotone}};
  r.rows.push_back({c.id, "cut", d, res.value, ms});
  return r;
}

RunResult cmd_complement(Context& c) {
  const Subgroup h = subgroup_of(c.cfg);
  RunResult r;
  r.record["inputs"] = {{"subgroup", to_json(h)}};
  json out;
  const auto k = find_complement(h, c.cap);
  if (k) {
    out["complement"] = to_json(*k);
    out["verified"] = is_complement(h, *k);
    r.postcondition_ok = out["verified"].get<bool>();
  } else {
    out["complement"] = nullptr;
    if (is_p_group(h.parent())) {
      if (h.generators().size() == 1) {
        const HullResult hull = complemented_hull(h.parent(), h.generators()[0]);
        out["hull"] = complemented_json(hull);
        out["hull"]["bound"] = hull.bound;
        out["hull"]["blocks"] = hull.blocks;
      } else {
        const EnlargeResult e = complemented_enlarge(h);
        out["enlarged"] = complemented_json(e);
        out["enlarged"]["bound"] = e.bound;
      }
    }
  }
  r.record["outputs"] = out;
  return r;
}

RunResult cmd_shrink(Context& c) {
  const Subgroup h = subgroup_of(c.cfg);
  RunResult r;
  r.record["inputs"] = {{"subgroup", to_json(h)}};
  const bool pg = is_p_group(h.parent());
  const ShrinkResult s = pg ? complemented_shrink(h) : mtorsion_complemented_shrink(h);
  json out = complemented_json(s);
  out["index"] = s.index;
  out["method"] = pg ? "p-group" : "primary components";
  if (pg) {
    out["bound"] = s.bound;
    out["within_bound"] = s.index <= s.bound;
    r.postcondition_ok = s.index <= s.bound;
  }
  r.postcondition_ok = r.postcondition_ok && out["verified"].get<bool>();
  r.record["outputs"] = out;
  return r;
}

RunResult cmd_crosssection(Context& c) {
  const Homomorphism tau = hom_from_json(field(c.cfg, "tau", ""), "tau");
  const PolyMap iota = polynomial_cross_section(tau);
  const Degree d = degree(iota, c.cap);
  RunResult r;
  r.record["inputs"] = {{"tau", to_json(tau)}};
  r.record["outputs"] = {{"iota", to_json(iota)},
                         {"degree", to_json(d)},
                         {"torsion", {tau.codomain().torsion(), tau.domain().torsion()}},
                         {"verified", true}};
  r.postcondition_ok = d.polynomial;
  return r;
}

RunResult cmd_decompose(Context& c) {
  const Homomorphism tau = hom_from_json(field(c.cfg, "tau", ""), "tau");
  const SurjectionDecomposition d = decompose_surjection(tau);
  RunResult r;
  r.record["inputs"] = {{"tau", to_json(tau)}};
  r.record["outputs"] = {{"s", to_json(d.s)},     {"inner", to_json(d.inner)}, {"p", to_json(d.p)},
                         {"t", to_json(d.t)},     {"m", d.m},                  {"n", d.n},
                         {"prime", d.prime},      {"pivots", d.pivots},        {"reduced_domain", d.reduced_domain},
                         {"verified", true}};
  return r;
}

RunResult cmd_degree(Context& c) {
  const PolyMap p = polymap_from_json(field(c.cfg, "map", ""), c.sources(), "map");
  RunResult r;
  r.record["inputs"] = {{"map", to_json(p)}};
  r.record["outputs"] = {{"degree", to_json(degree(p, c.cap))}};
  return r;
}

json projected_json(const ProjectedPhase& pp) {
  json sums = json::array(), vanish = json::array();
  for (std::size_t x = 0; x < pp.fiber_sums.size(); ++x) {
    sums.push_back(pp.fiber_sums[x].counts());
    vanish.push_back(pp.vanishes_at(x));
  }
  return {{"table", complex_table(pp.table.values())},
          {"fiber_sums", sums},
          {"fiber_size", pp.fiber_size},
          {"vanishes", vanish},
          {"degree", to_json(pp.degree)},
          {"torsion", {pp.torsion, pp.source_torsion}},
          {"rank_preserving", pp.rank_preserving}};
}

RunResult cmd_project(Context& c) {
  const PolyMap phi = polymap_from_json(field(c.cfg, "phi", ""), c.sources(), "phi");
  const Homomorphism tau = hom_from_json(field(c.cfg, "tau", ""), "tau");
  const ProjectedPhase pp = project_phase(phi, tau);
  RunResult r;
  r.record["inputs"] = {{"phi", to_json(phi)}, {"tau", to_json(tau)}};
  json out = projected_json(pp);
  if (c.cfg.value("average", true)) {
    const PolyMap iota = c.cfg.contains("iota") ? polymap_from_json(c.cfg["iota"], c.sources(), "iota")
                                                : polynomial_cross_section(tau);
    const AverageFamily fam = projected_as_average(pp, iota);
    bool ok = true;
    for (const auto& d : fam.degrees) ok = ok && within(d, fam.degree_bound);
    out["average"] = {{"iota", to_json(iota)},
                      {"kernel_size", fam.kernel.size()},
                      {"member_degrees", degrees_json(fam.degrees)},
                      {"cross_section_degree", to_json(fam.cross_section_degree)},
                      {"degree_bound", fam.degree_bound},
                      {"reproduces_projection", true},
                      {"degrees_within_bound", ok}};
    r.postcondition_ok = ok;
  }
  r.record["outputs"] = out;
  return r;
}

RunResult cmd_obstruct(Context& c) {
  const GroupFunction f = function_from_json(field(c.cfg, "function", ""), c.sources(), "function");
  const PolyMap phi = polymap_from_json(field(c.cfg, "phi", ""), c.sources(), "phi");
  const Homomorphism tau = hom_from_json(field(c.cfg, "tau", ""), "tau");
  const int k = static_cast<int>(int_field(c.cfg, "k", ""));
  const ProjectedPhase pp = project_phase(phi, tau);
  const auto t0 = std::chrono::steady_clock::now();
  const ObstructionReport rep = obstruction_check(f, pp, k, c.tolerance, c.cap);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  RunResult r;
  r.record["inputs"] = {{"function", to_json(f)}, {"phi", to_json(phi)}, {"tau", to_json(tau)}, {"k", k}};
  r.record["outputs"] = {{"correlation", rep.correlation}, {"norm", rep.norm}, {"k", rep.k}, {"holds", rep.holds},
                         {"projected", projected_json(pp)}};
  r.rows.push_back({c.id, "gowers", k + 1, rep.norm, ms});
  r.postcondition_ok = rep.holds;
  return r;
}

RunResult cmd_avg_split(Context& c) {
  const CocycleInstance in = cocycle_from_json(field(c.cfg, "cocycle", ""), c.sources(), "cocycle");
  const Cocycle e = average_E(in.rho, in.y1, in.y2);
  const Cocycle ep = rooted_average_Eprime(in.rho, in.y1, in.y2);
  const Cocycle ee = average_E(e, in.y1, in.y2);
  const CubeSet cs(in.rho.space, in.rho.dimension, c.cap);
  const std::uint64_t s2 = CubeSet(in.y2, in.rho.dimension).size();
  const FinAbGroup& z = in.rho.codomain;
  bool factors = true;
  for (std::uint64_t i = 0; i < cs.size(); ++i) factors = factors && e.table[i] == e.table[i % s2];
  std::map<Code, Element> by_root;
  bool root_only = true;
  for (std::uint64_t i = 0; i < cs.size(); ++i) {
    const Element diff = z.sub(ep.table[i], e.table[i]);
    auto [it, fresh] = by_root.emplace(cs.cube(i)[0], diff);
    if (!fresh && it->second != diff) root_only = false;
  }
  const bool e_cocycle = is_cocycle(e);
  RunResult r;
  r.record["inputs"] = {{"y1", to_json(in.y1)}, {"y2", to_json(in.y2)}, {"codomain", to_json(z)},
                        {"dimension", in.rho.dimension}, {"rho", to_json(in.rho)}};
  r.record["outputs"] = {{"E", to_json(e)},
                         {"E_prime", to_json(ep)},
                         {"E_is_cocycle", e_cocycle},
                         {"E_factors", factors},
                         {"E_idempotent", ee.table == e.table},
                         {"difference_depends_on_root_only", root_only}};
  r.postcondition_ok = e_cocycle && factors && ee.table == e.table;
  return r;
}

RunResult cmd_cocycle_split(Context& c) {
  const CocycleInstance in = cocycle_from_json(field(c.cfg, "cocycle", ""), c.sources(), "cocycle");
  const CocycleCheck chk = check_cocycle(in.rho);
  const SplitResult s = split_cocycle(in.rho, in.y1, in.y2);
  RunResult r;
  json g = json::array();
  for (const auto& v : s.g) g.push_back(v);
  r.record["inputs"] = {{"y1", to_json(in.y1)}, {"y2", to_json(in.y2)}, {"codomain", to_json(in.rho.codomain)},
                        {"dimension", in.rho.dimension}, {"rho", to_json(in.rho)}};
  r.record["outputs"] = {{"kappa", to_json(s.kappa)},
                         {"g", g},
                         {"residual_zero", s.residual_zero},
                         {"kappa_factors", s.kappa_factors},
                         {"check",
                          {{"additive", chk.additive},
                           {"permutation_invariant", chk.permutation_invariant},
                           {"reflection_sign", chk.reflection_sign ? json(*chk.reflection_sign) : json(nullptr)}}}};
  r.postcondition_ok = s.residual_zero && s.kappa_factors;
  return r;
}

RunResult cmd_morphisms(Context& c) {
  const FilteredGroupNilspace x = nilspace_from_json(field(c.cfg, "x", ""), "x");
  const FilteredGroupNilspace y = nilspace_from_json(field(c.cfg, "y", ""), "y");
  std::optional<int> max_dim;
  if (c.cfg.contains("max_dim")) max_dim = static_cast<int>(int_field(c.cfg, "max_dim", ""));
  const auto maps = enumerate_morphisms(x, y, max_dim, c.cap);
  std::size_t constants = 0;
  for (const auto& f : maps) {
    if (std::all_of(f.begin(), f.end(), [&](Code v) { return v == f[0]; })) ++constants;
  }
  RunResult r;
  r.record["inputs"] = {{"x", to_json(x)}, {"y", to_json(y)}, {"max_dim", max_dim.value_or(y.step() + 1)}};
  r.record["outputs"] = {{"count", maps.size()}, {"constants", constants}, {"maps", maps},
                         {"all_constant", constants == maps.size()}};
  return r;
}

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> r{
      {"norm", {{"function", "order"}, cmd_norm}},
      {"boxnorm", {{"function", "split"}, cmd_boxnorm}},
      {"cutnorm", {{"function", "blocks", "d", "restarts", "iterations"}, cmd_cutnorm}},
      {"complement", {{"group", "generators"}, cmd_complement}},
      {"shrink", {{"group", "generators"}, cmd_shrink}},
      {"crosssection", {{"tau"}, cmd_crosssection}},
      {"decompose", {{"tau"}, cmd_decompose}},
      {"degree", {{"map"}, cmd_degree}},
      {"project", {{"phi", "tau", "iota", "average"}, cmd_project}},
      {"obstruct", {{"function", "phi", "tau", "k"}, cmd_obstruct}},
      {"avg-split", {{"cocycle"}, cmd_avg_split}},
      {"cocycle-split", {{"cocycle"}, cmd_cocycle_split}},
      {"morphisms", {{"x", "y", "max_dim"}, cmd_morphisms}},
  };
  return r;
}

const std::set<std::string> kCommonKeys{"schema", "command", "id", "seed", "cap", "tolerance", "out"};

}  // namespace

std::string library_version() { return HOFA_VERSION; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

json normalize_config(json config, const RunOptions& opts) {
  if (!config.is_object()) throw ValidationError("config must be a JSON object");
  if (config.value("schema", std::string()) != kConfigSchema) {
    throw ValidationError(std::string("config schema must be \"") + kConfigSchema + "\"");
  }
  const std::string cmd = field(config, "command", "").get<std::string>();
  auto it = registry().find(cmd);
  if (it == registry().end()) throw ValidationError("unknown command '" + cmd + "'");
  for (const auto& [key, _] : config.items()) {
    if (!kCommonKeys.count(key) && !it->second.keys.count(key)) {
      throw ValidationError("unknown key '" + key + "' for command " + cmd);
    }
  }
  if (opts.seed) config["seed"] = *opts.seed;
  if (opts.cap) config["cap"] = *opts.cap;
  if (opts.tolerance) config["tolerance"] = *opts.tolerance;
  if (!config.contains("cap")) config["cap"] = kDefaultCostCap;
  if (!config.contains("tolerance")) config["tolerance"] = 1e-9;
  if (!config["cap"].is_number_unsigned() && !(config["cap"].is_number_integer() && config["cap"].get<std::int64_t>() > 0)) {
    throw ValidationError("cap must be a positive integer");
  }
  if (!config["tolerance"].is_number() || config["tolerance"].get<double>() < 0) {
    throw ValidationError("tolerance must be a non-negative number");
  }
  if (config.contains("seed") && !config["seed"].is_number_unsigned() &&
      !(config["seed"].is_number_integer() && config["seed"].get<std::int64_t>() >= 0)) {
    throw ValidationError("seed must be a non-negative integer");
  }
  return config;
}

std::string config_digest(const json& normalized) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : normalized.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunResult run(const json& config, const RunOptions& opts) {
  const json cfg = normalize_config(config, opts);
  const std::string digest = config_digest(cfg);
  Context ctx{cfg, std::nullopt, cfg["cap"].get<std::uint64_t>(), cfg["tolerance"].get<double>(),
              cfg.value("id", digest)};
  if (cfg.contains("seed")) ctx.rng.emplace(cfg["seed"].get<std::uint64_t>());

  const std::string cmd = cfg["command"].get<std::string>();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = registry().at(cmd).handler(ctx);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  json rec{{"schema", kResultSchema},
           {"version", library_version()},
           {"command", cmd},
           {"id", ctx.id},
           {"config_digest", digest},
           {"config", cfg},
           {"status", r.postcondition_ok ? "ok" : "postcondition_failed"},
           {"runtime_ms", ms}};
  rec["inputs"] = std::move(r.record["inputs"]);
  rec["outputs"] = std::move(r.record["outputs"]);
  r.record = std::move(rec);
  return r;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const json::exception*>(&e)) return 2;
  if (dynamic_cast<const CapExceeded*>(&e)) return 3;
  if (dynamic_cast<const HypothesisError*>(&e) || dynamic_cast<const InvariantViolation*>(&e)) return 4;
  return 1;
}

json error_record(const json& config, const std::exception& e) {
  std::string kind = "error";
  switch (exit_code_for(e)) {
    case 2: kind = "validation"; break;
    case 3: kind = "cap_exceeded"; break;
    case 4: kind = dynamic_cast<const HypothesisError*>(&e) ? "hypothesis" : "invariant"; break;
    default: break;
  }
  json rec{{"schema", kResultSchema}, {"version", library_version()}, {"status", "error"},
           {"error", {{"kind", kind}, {"message", e.what()}}}};
  if (config.is_object() && config.contains("command")) rec["command"] = config["command"];
  return rec;
}

std::string csv_text(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "instance,kind,k,value,runtime_ms\n";
  os.precision(17);
  for (const auto& r : rows) os << r.instance << ',' << r.kind << ',' << r.k << ',' << r.value << ',' << r.runtime_ms << '\n';
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw ValidationError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ValidationError("cannot move " + tmp + " to " + path);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace hofa::cli
