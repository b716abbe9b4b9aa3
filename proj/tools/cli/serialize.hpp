#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "hofa/complements.hpp"
#include "hofa/harmonics.hpp"
#include "hofa/nilcube.hpp"
#include "hofa/polymaps.hpp"

namespace hofa::cli {

using nlohmann::json;

/// Draws for randomized sources; absent when the config carries no seed.
struct SourceContext {
  std::mt19937_64* rng = nullptr;
  std::uint64_t cap = kDefaultCostCap;

  std::mt19937_64& require_rng(const std::string& what) const;
};

/// Typed access into a config object; failures are ValidationErrors naming the path.
const json& field(const json& obj, const std::string& key, const std::string& where);
std::int64_t int_field(const json& obj, const std::string& key, const std::string& where);
std::int64_t int_field_or(const json& obj, const std::string& key, std::int64_t fallback, const std::string& where);

FinAbGroup group_from_json(const json& j, const std::string& where);
json to_json(const FinAbGroup& g);

Element element_from_json(const json& j, const FinAbGroup& g, const std::string& where);
std::vector<Element> elements_from_json(const json& j, const FinAbGroup& g, const std::string& where);

/// {"domain": [..], "codomain": [..], "matrix": [[..]]}
Homomorphism hom_from_json(const json& j, const std::string& where);
json to_json(const Homomorphism& h);

json to_json(const Subgroup& s);

/// Table form {"domain", "codomain", "values"} (flat, row-major), or a
/// generated form: "polynomial" (terms in power or binomial basis into Z_N)
/// and "random" (seeded phase polynomial of bounded degree).
PolyMap polymap_from_json(const json& j, const SourceContext& ctx, const std::string& where);
json to_json(const PolyMap& p);

json to_json(const Degree& d);

/// [[order, degree], ...]
FilteredGroupNilspace nilspace_from_json(const json& j, const std::string& where);
json to_json(const FilteredGroupNilspace& x);

/// Sources: constant, values, phases, phase, bilinear, random_sign, random_disk.
GroupFunction function_from_json(const json& j, const SourceContext& ctx, const std::string& where);
/// Exact functions serialize their phases as [num, den]; others as [re, im].
json to_json(const GroupFunction& f);

json complex_json(std::complex<double> z);

/// Cocycle on C^n(Y_1 x Y_2) together with the split factors.
struct CocycleInstance {
  FilteredGroupNilspace y1, y2;
  Cocycle rho;
};
CocycleInstance cocycle_from_json(const json& j, const SourceContext& ctx, const std::string& where);
/// Object keyed by the decimal vertex code of every cube.
json to_json(const Cocycle& c);

}  // namespace hofa::cli
