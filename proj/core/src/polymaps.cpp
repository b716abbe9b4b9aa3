#include "hofa/polymaps.hpp"

#include <algorithm>
#include <set>

namespace hofa {

PolyMap::PolyMap(FinAbGroup domain, FinAbGroup codomain, std::vector<std::int64_t> values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
  const std::size_t rc = codomain_.num_factors();
  if (values_.size() != domain_.order() * rc) throw ValidationError("value table does not cover the domain");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const std::int64_t m = codomain_.orders()[k % rc];
    if (values_[k] < 0 || values_[k] >= m) throw ValidationError("value table entry out of range");
  }
}

PolyMap PolyMap::from_function(const FinAbGroup& domain, const FinAbGroup& codomain,
                               const std::function<Element(const Element&)>& f) {
  std::vector<std::int64_t> v;
  v.reserve(domain.order() * codomain.num_factors());
  for (Code x = 0; x < domain.order(); ++x) {
    const Element y = codomain.reduce(f(domain.decode(x)));
    v.insert(v.end(), y.begin(), y.end());
  }
  return PolyMap(domain, codomain, std::move(v));
}

PolyMap PolyMap::from_homomorphism(const Homomorphism& h) {
  return from_function(h.domain(), h.codomain(), [&](const Element& x) { return h.apply(x); });
}

PolyMap PolyMap::constant(const FinAbGroup& domain, const FinAbGroup& codomain, const Element& c) {
  codomain.check(c);
  return from_function(domain, codomain, [&](const Element&) { return c; });
}

PolyMap PolyMap::from_table(const FinAbGroup& domain, const FinAbGroup& codomain, const std::vector<Element>& table) {
  if (table.size() != domain.order()) throw ValidationError("value table does not cover the domain");
  std::vector<std::int64_t> v;
  for (const auto& y : table) {
    codomain.check(y);
    v.insert(v.end(), y.begin(), y.end());
  }
  return PolyMap(domain, codomain, std::move(v));
}

Element PolyMap::at(Code x) const {
  const std::size_t rc = codomain_.num_factors();
  return Element(values_.begin() + static_cast<std::ptrdiff_t>(x * rc),
                 values_.begin() + static_cast<std::ptrdiff_t>((x + 1) * rc));
}

bool PolyMap::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](std::int64_t v) { return v == 0; });
}

bool PolyMap::is_constant() const {
  const std::size_t rc = codomain_.num_factors();
  for (std::size_t k = rc; k < values_.size(); ++k) {
    if (values_[k] != values_[k % rc]) return false;
  }
  return true;
}

PolyMap compose(const PolyMap& outer, const PolyMap& inner) {
  if (outer.domain() != inner.codomain()) throw ValidationError("composition of maps with mismatched groups");
  return PolyMap::from_function(inner.domain(), outer.codomain(),
                                [&](const Element& x) { return outer.at(inner.codomain().encode(inner(x))); });
}

PolyMap add(const PolyMap& a, const PolyMap& b) {
  if (a.domain() != b.domain() || a.codomain() != b.codomain()) throw ValidationError("sum of maps on different groups");
  const std::size_t rc = a.codomain().num_factors();
  std::vector<std::int64_t> v(a.values().size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = mod_floor(a.values()[k] + b.values()[k], a.codomain().orders()[k % rc]);
  return PolyMap(a.domain(), a.codomain(), std::move(v));
}

namespace {

using Table = std::vector<std::int64_t>;

std::vector<Code> shift_table(const FinAbGroup& g, const Element& h) {
  std::vector<Code> s(g.order());
  for (Code x = 0; x < g.order(); ++x) s[x] = g.encode(g.add(g.decode(x), h));
  return s;
}

Table derive(const Table& t, const std::vector<Code>& shift, const std::vector<std::int64_t>& orders) {
  const std::size_t rc = orders.size();
  Table out(t.size());
  for (Code x = 0; x < shift.size(); ++x) {
    for (std::size_t i = 0; i < rc; ++i) {
      const std::int64_t d = t[shift[x] * rc + i] - t[x * rc + i];
      out[x * rc + i] = d < 0 ? d + orders[i] : d;
    }
  }
  return out;
}

bool zero_table(const Table& t) {
  return std::all_of(t.begin(), t.end(), [](std::int64_t v) { return v == 0; });
}

}  // namespace

PolyMap derivative(const PolyMap& p, const Element& h) {
  p.domain().check(h);
  return PolyMap(p.domain(), p.codomain(), derive(p.values(), shift_table(p.domain(), h), p.codomain().orders()));
}

Degree degree(const PolyMap& p, std::uint64_t cap) {
  std::vector<Element> gens;
  for (std::size_t j = 0; j < p.domain().num_factors(); ++j) {
    if (p.domain().orders()[j] > 1) gens.push_back(p.domain().generator(j));
  }
  return degree(p, gens, cap);
}

Degree degree(const PolyMap& p, const std::vector<Element>& generators, std::uint64_t cap) {
  for (const auto& g : generators) p.domain().check(g);
  if (Subgroup::generated(p.domain(), generators).order() != p.domain().order()) {
    throw ValidationError("degree: derivative directions do not generate the domain");
  }
  if (p.is_constant()) return Degree::of(0);
  std::vector<std::vector<Code>> shifts;
  for (const auto& g : generators) shifts.push_back(shift_table(p.domain(), g));

  const std::uint64_t step_cost = std::max<std::uint64_t>(1, p.values().size());
  std::uint64_t spent = 0;
  // Level j holds the distinct nonzero j-fold derivatives; it is a function
  // of level j-1 alone, so a repeated level means the zero table is never reached.
  std::set<Table> level{p.values()};
  std::vector<std::set<Table>> history{level};
  for (int j = 1;; ++j) {
    std::set<Table> next;
    for (const auto& t : level) {
      for (const auto& s : shifts) {
        spent += step_cost;
        if (spent > cap) throw CapExceeded("degree certification", spent, cap);
        Table d = derive(t, s, p.codomain().orders());
        if (!zero_table(d)) next.insert(std::move(d));
      }
    }
    if (next.empty()) return Degree::of(j - 1);
    if (std::find(history.begin(), history.end(), next) != history.end()) return Degree::not_polynomial();
    history.push_back(next);
    level = std::move(next);
  }
}

// ------------------------------------------------------------ BinomialPoly

namespace {

BigInt binom(std::int64_t x, std::size_t i) {
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t t = 0; t < i; ++t) {
    num *= BigInt(x) - BigInt(t);
    den *= BigInt(t + 1);
  }
  return num / den;
}

std::int64_t big_mod(const BigInt& v, std::int64_t m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

}  // namespace

Element BinomialPoly::eval(std::int64_t x) const {
  codomain.check(constant);
  Element out = constant;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const BigInt c = binom(x, i + 1);
    for (std::size_t j = 0; j < out.size(); ++j) {
      const std::int64_t m = codomain.orders()[j];
      out[j] = mod_floor(out[j] + big_mod(c * coefficients[i][j], m), m);
    }
  }
  return out;
}

std::uint64_t BinomialPoly::minimal_period(std::uint64_t cap) const {
  // f(x+T) - f(x) has binomial degree < k, so it vanishes on Z iff it
  // vanishes at x = 0..k-1; checking 0..k is a safe superset.
  const std::size_t k = coefficients.size();
  std::vector<Element> base;
  for (std::size_t x = 0; x <= k; ++x) base.push_back(eval(static_cast<std::int64_t>(x)));
  for (std::uint64_t t = 1;; ++t) {
    if (t * (k + 1) > cap) throw CapExceeded("minimal_period search", t * (k + 1), cap);
    bool ok = true;
    for (std::size_t x = 0; x <= k && ok; ++x) {
      ok = eval(static_cast<std::int64_t>(t + x)) == base[x];
    }
    if (ok) return t;
  }
}

// -------------------------------------------------------------- cyclic lift

PolyMap cyclic_lift(std::int64_t p, int s, int d) {
  if (p < 2 || factorize(p).size() != 1 || factorize(p).front().second != 1) {
    throw ValidationError("cyclic_lift: p must be prime");
  }
  if (s < 1 || d < s) throw ValidationError("cyclic_lift: need d >= s >= 1");
  const auto ps = static_cast<std::int64_t>(saturating_pow(p, s));
  const auto pd = static_cast<std::int64_t>(saturating_pow(p, d));
  return PolyMap::from_function(FinAbGroup({ps}), FinAbGroup({pd}), [](const Element& x) { return x; });
}

// ------------------------------------------------- forward difference power

BigMatrix forward_difference_matrix_power(std::size_t n, std::uint64_t q) {
  if (n == 0) throw ValidationError("forward difference matrix needs n >= 1");
  BigMatrix acc(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) acc[i][i] = 1;
  for (std::uint64_t step = 0; step < q; ++step) {
    // (C X)[i] = X[i+1] - X[i]
    BigMatrix next(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t up = (i + 1) % n;
      for (std::size_t j = 0; j < n; ++j) next[i][j] = acc[up][j] - acc[i][j];
    }
    acc = std::move(next);
  }
  return acc;
}

BigMatrix forward_difference_power(std::int64_t p, int s) {
  const std::uint64_t n = saturating_pow(p, s);
  if (n > 256) throw CapExceeded("forward_difference_power size", n, 256);
  BigMatrix c = forward_difference_matrix_power(n, n);
  for (const auto& row : c) {
    for (const auto& v : row) {
      if (v % p != 0) throw InvariantViolation("forward_difference_power: entry not divisible by p");
    }
  }
  return c;
}

}  // namespace hofa
