#include "serialize.hpp"

#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace hofa::cli {

namespace {

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string at(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

}  // namespace

std::mt19937_64& SourceContext::require_rng(const std::string& what) const {
  if (rng == nullptr) throw ValidationError(what + ": randomized source needs a seed");
  return *rng;
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(at(where, key) + ": missing");
  return *it;
}

std::int64_t int_field(const json& obj, const std::string& key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ValidationError(at(where, key) + ": expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t int_field_or(const json& obj, const std::string& key, std::int64_t fallback, const std::string& where) {
  return obj.contains(key) ? int_field(obj, key, where) : fallback;
}

FinAbGroup group_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": group literal must be a list of orders");
  std::vector<std::int64_t> orders;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      throw ValidationError(where + ": cyclic orders must be positive integers");
    }
    orders.push_back(v.get<std::int64_t>());
  }
  return FinAbGroup(std::move(orders));
}

json to_json(const FinAbGroup& g) { return g.orders(); }

Element element_from_json(const json& j, const FinAbGroup& g, const std::string& where) {
  if (!j.is_array() || j.size() != g.num_factors()) {
    throw ValidationError(where + ": element must have " + std::to_string(g.num_factors()) + " coordinates");
  }
  Element e;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ValidationError(where + ": coordinates must be integers");
    e.push_back(v.get<std::int64_t>());
  }
  return g.reduce(e);
}

std::vector<Element> elements_from_json(const json& j, const FinAbGroup& g, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected a list of elements");
  std::vector<Element> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(element_from_json(j[i], g, where + "[" + std::to_string(i) + "]"));
  return out;
}

Homomorphism hom_from_json(const json& j, const std::string& where) {
  const FinAbGroup dom = group_from_json(field(j, "domain", where), at(where, "domain"));
  const FinAbGroup cod = group_from_json(field(j, "codomain", where), at(where, "codomain"));
  const json& m = field(j, "matrix", where);
  if (!m.is_array() || m.size() != cod.num_factors()) {
    throw ValidationError(at(where, "matrix") + ": need one row per codomain factor");
  }
  IntMatrix mat;
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != dom.num_factors()) {
      throw ValidationError(at(where, "matrix") + ": need one column per domain factor");
    }
    std::vector<std::int64_t> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw ValidationError(at(where, "matrix") + ": entries must be integers");
      r.push_back(v.get<std::int64_t>());
    }
    mat.push_back(std::move(r));
  }
  return Homomorphism(dom, cod, std::move(mat));
}

json to_json(const Homomorphism& h) {
  return {{"domain", to_json(h.domain())}, {"codomain", to_json(h.codomain())}, {"matrix", h.matrix()}};
}

json to_json(const Subgroup& s) {
  json gens = json::array();
  for (const auto& g : s.generators()) gens.push_back(g);
  return {{"group", to_json(s.parent())}, {"generators", gens}, {"order", s.order()}, {"index", s.index()}};
}

PolyMap polymap_from_json(const json& j, const SourceContext& ctx, const std::string& where) {
  const std::string kind = j.value("kind", std::string("table"));
  if (kind == "table") {
    const FinAbGroup dom = group_from_json(field(j, "domain", where), at(where, "domain"));
    const FinAbGroup cod = group_from_json(field(j, "codomain", where), at(where, "codomain"));
    const json& v = field(j, "values", where);
    if (!v.is_array() || v.size() != dom.order() * cod.num_factors()) {
      throw ValidationError(at(where, "values") + ": flat table must have |domain| * rank(codomain) entries");
    }
    std::vector<std::int64_t> vals;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) throw ValidationError(at(where, "values") + ": entries must be integers");
      vals.push_back(mod_floor(v[i].get<std::int64_t>(), cod.orders()[i % cod.num_factors()]));
    }
    return PolyMap(dom, cod, std::move(vals));
  }
  if (kind == "polynomial") {
    const FinAbGroup dom = group_from_json(field(j, "domain", where), at(where, "domain"));
    const std::int64_t n = int_field(j, "modulus", where);
    if (n < 1) throw ValidationError(at(where, "modulus") + ": must be >= 1");
    const std::string basis = j.value("basis", std::string("power"));
    if (basis != "power" && basis != "binomial") throw ValidationError(at(where, "basis") + ": power or binomial");
    struct Term {
      std::int64_t coef;
      std::vector<std::int64_t> powers;
    };
    std::vector<Term> terms;
    for (const auto& t : field(j, "terms", where)) {
      Term term{int_field(t, "coef", at(where, "terms")), {}};
      const json& p = field(t, "powers", at(where, "terms"));
      if (!p.is_array() || p.size() != dom.num_factors()) {
        throw ValidationError(at(where, "terms") + ": powers need one exponent per coordinate");
      }
      for (const auto& e : p) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
          throw ValidationError(at(where, "terms") + ": exponents must be non-negative integers");
        }
        term.powers.push_back(e.get<std::int64_t>());
      }
      terms.push_back(std::move(term));
    }
    const std::int64_t c0 = int_field_or(j, "constant", 0, where);
    using boost::multiprecision::cpp_int;
    const FinAbGroup cod({n});
    return PolyMap::from_function(dom, cod, [&](const Element& x) {
      cpp_int s = c0;
      for (const auto& t : terms) {
        cpp_int m = t.coef;
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (basis == "power") {
            m *= boost::multiprecision::pow(cpp_int(x[i]), static_cast<unsigned>(t.powers[i]));
          } else {
            cpp_int b = 1;
            for (std::int64_t r = 0; r < t.powers[i]; ++r) b = b * (x[i] - r) / (r + 1);
            m *= b;
          }
        }
        s += m;
      }
      cpp_int r = s % n;
      if (r < 0) r += n;
      return Element{static_cast<std::int64_t>(r)};
    });
  }
  if (kind == "random") {
    const FinAbGroup dom = group_from_json(field(j, "domain", where), at(where, "domain"));
    const int k = static_cast<int>(int_field(j, "degree", where));
    if (k < 0) throw ValidationError(at(where, "degree") + ": must be >= 0");
    return random_phase_polynomial(dom, k, ctx.require_rng(where));
  }
  throw ValidationError(at(where, "kind") + ": unknown map source '" + kind + "'");
}

json to_json(const PolyMap& p) {
  return {{"domain", to_json(p.domain())}, {"codomain", to_json(p.codomain())}, {"values", p.values()}};
}

json to_json(const Degree& d) {
  if (!d.polynomial) return "NotPolynomial";
  return d.value;
}

FilteredGroupNilspace nilspace_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": nilspace literal must be a list of [order, degree] pairs");
  std::vector<std::pair<std::int64_t, int>> f;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
      throw ValidationError(where + ": each factor is [order, degree]");
    }
    if (p[0].get<std::int64_t>() < 1) throw ValidationError(where + ": orders must be >= 1");
    f.emplace_back(p[0].get<std::int64_t>(), p[1].get<int>());
  }
  return FilteredGroupNilspace(std::move(f));
}

json to_json(const FilteredGroupNilspace& x) {
  json out = json::array();
  for (const auto& [m, d] : x.factors()) out.push_back({m, d});
  return out;
}

json complex_json(std::complex<double> z) { return {z.real(), z.imag()}; }

GroupFunction function_from_json(const json& j, const SourceContext& ctx, const std::string& where) {
  const std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "bilinear") {
    const std::int64_t l = int_field(j, "l", where);
    if (l < 1 || l > 8) throw ValidationError(at(where, "l") + ": must be in [1, 8]");
    const FinAbGroup g(std::vector<std::int64_t>(static_cast<std::size_t>(2 * l), 2));
    std::vector<std::int64_t> nums(g.order());
    for (Code c = 0; c < g.order(); ++c) {
      const Element x = g.decode(c);
      std::int64_t s = 0;
      for (std::int64_t i = 0; i < l; ++i) s += x[i] * x[i + l];
      nums[c] = s % 2;
    }
    return GroupFunction::from_phases(g, 2, std::move(nums));
  }
  if (kind == "phase") return phase(polymap_from_json(field(j, "poly", where), ctx, at(where, "poly")));

  const FinAbGroup g = group_from_json(field(j, "group", where), at(where, "group"));
  if (kind == "constant") {
    const json& v = field(j, "value", where);
    if (v.is_number()) return GroupFunction::constant(g, Complex(v.get<double>(), 0));
    if (v.is_array() && v.size() == 2) return GroupFunction::constant(g, Complex(v[0].get<double>(), v[1].get<double>()));
    throw ValidationError(at(where, "value") + ": number or [re, im]");
  }
  if (kind == "values") {
    const json& v = field(j, "values", where);
    if (!v.is_array() || v.size() != g.order()) throw ValidationError(at(where, "values") + ": need one value per element");
    std::vector<Complex> vals;
    for (const auto& z : v) {
      if (z.is_number()) {
        vals.emplace_back(z.get<double>(), 0);
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        vals.emplace_back(z[0].get<double>(), z[1].get<double>());
      } else {
        throw ValidationError(at(where, "values") + ": entries are numbers or [re, im]");
      }
    }
    return GroupFunction::from_values(g, std::move(vals));
  }
  if (kind == "phases") {
    const json& v = field(j, "values", where);
    if (!v.is_array() || v.size() != g.order()) throw ValidationError(at(where, "values") + ": need one phase per element");
    std::int64_t n = 1;
    for (const auto& p : v) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer() ||
          p[1].get<std::int64_t>() < 1) {
        throw ValidationError(at(where, "values") + ": phases are [num, den] with den >= 1");
      }
      n = lcm64(n, p[1].get<std::int64_t>());
    }
    std::vector<std::int64_t> nums;
    for (const auto& p : v) nums.push_back(mod_floor(p[0].get<std::int64_t>() * (n / p[1].get<std::int64_t>()), n));
    return GroupFunction::from_phases(g, n, std::move(nums));
  }
  if (kind == "random_sign") {
    auto& rng = ctx.require_rng(where);
    std::vector<std::int64_t> nums(g.order());
    for (auto& v : nums) v = static_cast<std::int64_t>(rng() >> 63);
    return GroupFunction::from_phases(g, 2, std::move(nums));
  }
  if (kind == "random_disk") {
    auto& rng = ctx.require_rng(where);
    std::vector<Complex> vals(g.order());
    for (auto& v : vals) {
      const double r = std::sqrt(unit_double(rng));
      v = std::polar(r, 2 * M_PI * unit_double(rng));
    }
    return GroupFunction::from_values(g, std::move(vals));
  }
  throw ValidationError(at(where, "kind") + ": unknown function source '" + kind + "'");
}

json to_json(const GroupFunction& f) {
  json out{{"group", to_json(f.group())}};
  json vals = json::array();
  if (f.is_exact()) {
    for (auto a : f.numerators()) {
      const std::int64_t d = gcd64(a, f.modulus());
      vals.push_back({a / d, f.modulus() / d});
    }
    out["phases"] = vals;
  } else {
    for (const auto& z : f.values()) vals.push_back(complex_json(z));
    out["values"] = vals;
  }
  return out;
}

namespace {

std::vector<Element> point_function(const json& j, const FilteredGroupNilspace& x, const FinAbGroup& z,
                                    const SourceContext& ctx, const std::string& where) {
  if (j.is_null()) {
    auto& rng = ctx.require_rng(where);
    std::vector<Element> out(x.size(), z.zero());
    for (auto& e : out) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(z.orders()[i]));
    }
    return out;
  }
  std::vector<Element> out = elements_from_json(j, z, where);
  if (out.size() != x.size()) throw ValidationError(where + ": need one value per point");
  return out;
}

Cube cube_from_code(const std::string& code, const CubeSet& cs, const std::string& where) {
  using boost::multiprecision::cpp_int;
  cpp_int c;
  try {
    c = cpp_int(code);
  } catch (const std::exception&) {
    throw ValidationError(where + ": cube keys are decimal vertex codes");
  }
  Cube q(cs.vertices());
  const cpp_int base = cs.space().size();
  for (std::size_t w = q.size(); w-- > 0;) {
    q[w] = static_cast<Code>(c % base);
    c /= base;
  }
  if (c != 0) throw ValidationError(where + ": vertex code out of range");
  return q;
}

}  // namespace

CocycleInstance cocycle_from_json(const json& j, const SourceContext& ctx, const std::string& where) {
  CocycleInstance out;
  out.y1 = nilspace_from_json(field(j, "y1", where), at(where, "y1"));
  out.y2 = nilspace_from_json(field(j, "y2", where), at(where, "y2"));
  const FinAbGroup z = group_from_json(field(j, "codomain", where), at(where, "codomain"));
  const int n = static_cast<int>(int_field(j, "dimension", where));
  if (n < 1) throw ValidationError(at(where, "dimension") + ": must be >= 1");
  const FilteredGroupNilspace y = FilteredGroupNilspace::product(out.y1, out.y2);
  const std::string kind = j.value("kind", std::string("family"));

  if (kind == "zero") {
    out.rho = Cocycle{y, n, z, std::vector<Element>(CubeSet(y, n, ctx.cap).size(), z.zero())};
  } else if (kind == "family") {
    // σ(g∘q) on Y_1 x Y_2 plus the pullback of σ(g_2∘q) on Y_2; missing parts are drawn at random.
    const auto g = point_function(j.value("g", json()), y, z, ctx, at(where, "g"));
    const auto g2 = point_function(j.value("g2", json()), out.y2, z, ctx, at(where, "g2"));
    out.rho = add(coboundary(y, g, z, n), pullback(coboundary(out.y2, g2, z, n), out.y1));
  } else if (kind == "table") {
    const CubeSet cs(y, n, ctx.cap);
    const json& t = field(j, "table", where);
    if (!t.is_object() || t.size() != cs.size()) throw ValidationError(at(where, "table") + ": need one value per cube");
    out.rho = Cocycle{y, n, z, std::vector<Element>(cs.size(), z.zero())};
    for (const auto& [key, val] : t.items()) {
      const auto idx = cs.index_of(cube_from_code(key, cs, at(where, "table")));
      if (!idx) throw ValidationError(at(where, "table") + ": key " + key + " is not a cube");
      out.rho.table[*idx] = element_from_json(val, z, at(where, "table"));
    }
  } else {
    throw ValidationError(at(where, "kind") + ": unknown cocycle source '" + kind + "'");
  }
  return out;
}

json to_json(const Cocycle& c) {
  const CubeSet cs(c.space, c.dimension);
  json out = json::object();
  for (std::uint64_t i = 0; i < c.table.size(); ++i) out[cs.vertex_code(cs.cube(i))] = c.table[i];
  return out;
}

}  // namespace hofa::cli
