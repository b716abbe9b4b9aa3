#include "hofa/groups.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace hofa {

namespace {

// Materialized subgroups index a membership vector by code.
constexpr std::uint64_t kMaxMaterializedOrder = std::uint64_t{1} << 24;

}  // namespace

// ---------------------------------------------------------------- FinAbGroup

FinAbGroup::FinAbGroup(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
  strides_.assign(orders_.size(), 1);
  order_ = 1;
  torsion_ = 1;
  for (std::size_t j = orders_.size(); j-- > 0;) {
    if (orders_[j] < 1) throw ValidationError("cyclic factor orders must be >= 1");
    strides_[j] = order_;
    if (order_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(orders_[j])) {
      throw CapExceeded("group order overflows 64 bits", 0, 0);
    }
    order_ *= static_cast<std::uint64_t>(orders_[j]);
    torsion_ = lcm64(torsion_, orders_[j]);
  }
}

std::optional<std::int64_t> FinAbGroup::prime() const {
  if (torsion_ == 1) return std::nullopt;
  const auto f = factorize(torsion_);
  if (f.size() != 1) return std::nullopt;
  return f.front().first;
}

int FinAbGroup::torsion_exponent() const {
  if (torsion_ == 1) return 0;
  const auto f = factorize(torsion_);
  return f.size() == 1 ? f.front().second : 0;
}

Element FinAbGroup::generator(std::size_t j) const {
  Element e = zero();
  e.at(j) = orders_[j] == 1 ? 0 : 1;
  return e;
}

bool FinAbGroup::contains(const Element& x) const {
  if (x.size() != orders_.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0 || x[j] >= orders_[j]) return false;
  }
  return true;
}

void FinAbGroup::check(const Element& x) const {
  if (!contains(x)) throw ValidationError("element is not a reduced member of " + to_string());
}

Element FinAbGroup::reduce(const Element& v) const {
  if (v.size() != orders_.size()) throw ValidationError("element has wrong number of coordinates for " + to_string());
  Element out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = mod_floor(v[j], orders_[j]);
  return out;
}

Element FinAbGroup::add(const Element& a, const Element& b) const {
  Element out(orders_.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::int64_t s = a[j] + b[j];
    out[j] = s >= orders_[j] ? s - orders_[j] : s;
  }
  return out;
}

Element FinAbGroup::sub(const Element& a, const Element& b) const {
  Element out(orders_.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::int64_t s = a[j] - b[j];
    out[j] = s < 0 ? s + orders_[j] : s;
  }
  return out;
}

Element FinAbGroup::neg(const Element& a) const { return sub(zero(), a); }

Element FinAbGroup::scale(std::int64_t k, const Element& a) const {
  Element out(orders_.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = mod_floor(checked_mul(mod_floor(k, orders_[j]), a[j]), orders_[j]);
  }
  return out;
}

std::int64_t FinAbGroup::element_order(const Element& a) const {
  std::int64_t o = 1;
  for (std::size_t j = 0; j < a.size(); ++j) {
    o = lcm64(o, orders_[j] / gcd64(a[j], orders_[j]));
  }
  return o;
}

Code FinAbGroup::encode(const Element& x) const {
  Code c = 0;
  for (std::size_t j = 0; j < x.size(); ++j) c += static_cast<Code>(x[j]) * strides_[j];
  return c;
}

Element FinAbGroup::decode(Code c) const {
  Element x(orders_.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = static_cast<std::int64_t>(c / strides_[j]);
    c %= strides_[j];
  }
  return x;
}

std::string FinAbGroup::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < orders_.size(); ++j) os << (j ? "," : "") << orders_[j];
  os << ']';
  return os.str();
}

FinAbGroup FinAbGroup::product(const FinAbGroup& a, const FinAbGroup& b) {
  std::vector<std::int64_t> o = a.orders();
  o.insert(o.end(), b.orders().begin(), b.orders().end());
  return FinAbGroup(std::move(o));
}

// -------------------------------------------------------------- Homomorphism

Homomorphism::Homomorphism(FinAbGroup domain, FinAbGroup codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  const std::size_t rows = codomain_.num_factors();
  const std::size_t cols = domain_.num_factors();
  if (matrix_.size() != rows) throw ValidationError("homomorphism matrix has wrong number of rows");
  for (std::size_t i = 0; i < rows; ++i) {
    if (matrix_[i].size() != cols) throw ValidationError("homomorphism matrix has wrong number of columns");
    for (std::size_t j = 0; j < cols; ++j) {
      matrix_[i][j] = mod_floor(matrix_[i][j], codomain_.orders()[i]);
      if (checked_mul(matrix_[i][j], domain_.orders()[j]) % codomain_.orders()[i] != 0) {
        throw ValidationError("matrix does not define a homomorphism " + domain_.to_string() + " -> " +
                              codomain_.to_string() + " (column " + std::to_string(j) + ")");
      }
    }
  }
}

Homomorphism Homomorphism::identity(const FinAbGroup& g) {
  return Homomorphism(g, g, identity_matrix(g.num_factors()));
}

Homomorphism Homomorphism::zero(const FinAbGroup& domain, const FinAbGroup& codomain) {
  return Homomorphism(domain, codomain,
                      IntMatrix(codomain.num_factors(), std::vector<std::int64_t>(domain.num_factors(), 0)));
}

Homomorphism Homomorphism::from_images(const FinAbGroup& domain, const FinAbGroup& codomain,
                                       const std::vector<Element>& images) {
  if (images.size() != domain.num_factors()) throw ValidationError("need one image per domain generator");
  IntMatrix m(codomain.num_factors(), std::vector<std::int64_t>(domain.num_factors(), 0));
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (images[j].size() != codomain.num_factors()) throw ValidationError("image has wrong number of coordinates");
    for (std::size_t i = 0; i < codomain.num_factors(); ++i) m[i][j] = images[j][i];
  }
  return Homomorphism(domain, codomain, std::move(m));
}

Element Homomorphism::apply(const Element& x) const {
  domain_.check(x);
  Element out(codomain_.num_factors(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int64_t m = codomain_.orders()[i];
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      acc = mod_floor(acc + checked_mul(matrix_[i][j], x[j]) % m, m);
    }
    out[i] = acc;
  }
  return out;
}

Homomorphism Homomorphism::compose(const Homomorphism& inner) const {
  if (inner.codomain_ != domain_) throw ValidationError("composition of homomorphisms with mismatched groups");
  const std::size_t rows = codomain_.num_factors();
  const std::size_t mid = domain_.num_factors();
  const std::size_t cols = inner.domain_.num_factors();
  IntMatrix m(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::int64_t q = codomain_.orders()[i];
    for (std::size_t k = 0; k < mid; ++k) {
      if (matrix_[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        m[i][j] = mod_floor(m[i][j] + checked_mul(matrix_[i][k], inner.matrix_[k][j]) % q, q);
      }
    }
  }
  return Homomorphism(inner.domain_, codomain_, std::move(m));
}

bool Homomorphism::is_surjective() const { return image(*this).order() == codomain_.order(); }

bool Homomorphism::is_injective() const { return kernel(*this).order() == 1; }

Homomorphism Homomorphism::inverse() const {
  if (!is_bijective()) throw HypothesisError("homomorphism is not bijective");
  std::vector<Code> pre(codomain_.order());
  for (Code x = 0; x < domain_.order(); ++x) pre[apply_code(x)] = x;
  std::vector<Element> images;
  for (std::size_t j = 0; j < codomain_.num_factors(); ++j) {
    images.push_back(domain_.decode(pre[codomain_.encode(codomain_.generator(j))]));
  }
  return from_images(codomain_, domain_, images);
}

// ------------------------------------------------------------------ Subgroup

Subgroup Subgroup::generated(const FinAbGroup& parent, std::vector<Element> generators) {
  if (parent.order() > kMaxMaterializedOrder) {
    throw CapExceeded("subgroup materialization", parent.order(), kMaxMaterializedOrder);
  }
  Subgroup s;
  s.parent_ = parent;
  for (const auto& g : generators) parent.check(g);
  s.generators_ = std::move(generators);
  s.member_.assign(parent.order(), 0);
  std::vector<Code> gens;
  for (const auto& g : s.generators_) gens.push_back(parent.encode(g));

  std::vector<Code> frontier{0};
  s.member_[0] = 1;
  s.elements_.push_back(0);
  while (!frontier.empty()) {
    std::vector<Code> next;
    for (Code e : frontier) {
      for (Code g : gens) {
        const Code c = parent.add_codes(e, g);
        if (!s.member_[c]) {
          s.member_[c] = 1;
          s.elements_.push_back(c);
          next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(s.elements_.begin(), s.elements_.end());
  return s;
}

Subgroup Subgroup::whole(const FinAbGroup& parent) {
  std::vector<Element> gens;
  for (std::size_t j = 0; j < parent.num_factors(); ++j) gens.push_back(parent.generator(j));
  return generated(parent, std::move(gens));
}

Subgroup Subgroup::coordinate(const FinAbGroup& parent, const std::vector<std::size_t>& coords) {
  std::vector<Element> gens;
  for (std::size_t j : coords) gens.push_back(parent.generator(j));
  return generated(parent, std::move(gens));
}

bool Subgroup::is_subgroup_of(const Subgroup& other) const {
  if (parent_ != other.parent_) return false;
  return std::all_of(elements_.begin(), elements_.end(), [&](Code c) { return other.member_[c]; });
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent()) throw ValidationError("intersection of subgroups of different groups");
  std::vector<Code> common;
  std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                        std::back_inserter(common));
  // Generators: the element set itself is closed, so a presentation is cheap.
  const FinAbGroup& g = a.parent();
  std::vector<Element> gens;
  Subgroup acc = Subgroup::trivial(g);
  for (Code c : common) {
    if (acc.contains_code(c)) continue;
    gens.push_back(g.decode(c));
    acc = Subgroup::generated(g, gens);
  }
  return acc;
}

Subgroup sum(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent()) throw ValidationError("sum of subgroups of different groups");
  std::vector<Element> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return Subgroup::generated(a.parent(), std::move(gens));
}

Subgroup kernel(const Homomorphism& h) {
  const FinAbGroup& d = h.domain();
  if (d.order() > kMaxMaterializedOrder) throw CapExceeded("kernel enumeration", d.order(), kMaxMaterializedOrder);
  std::vector<Element> gens;
  Subgroup acc = Subgroup::trivial(d);
  for (Code x = 0; x < d.order(); ++x) {
    if (h.apply_code(x) != 0 || acc.contains_code(x)) continue;
    gens.push_back(d.decode(x));
    acc = Subgroup::generated(d, gens);
  }
  return acc;
}

Subgroup image(const Homomorphism& h) {
  std::vector<Element> gens;
  for (std::size_t j = 0; j < h.domain().num_factors(); ++j) gens.push_back(h.apply(h.domain().generator(j)));
  return Subgroup::generated(h.codomain(), std::move(gens));
}

Subgroup image_of(const Homomorphism& h, const Subgroup& s) {
  if (s.parent() != h.domain()) throw ValidationError("subgroup does not live in the homomorphism's domain");
  std::vector<Element> gens;
  for (const auto& g : s.generators()) gens.push_back(h.apply(g));
  return Subgroup::generated(h.codomain(), std::move(gens));
}

// ------------------------------------------------------------------ Quotient

Quotient quotient(const FinAbGroup& g, const Subgroup& h) {
  if (h.parent() != g) throw ValidationError("H is not a subgroup of " + g.to_string());
  return quotient(h);
}

Quotient quotient(const Subgroup& h) {
  const FinAbGroup& g = h.parent();
  const std::size_t r = g.num_factors();
  const std::size_t s = h.generators().size();
  IntMatrix rel(r, std::vector<std::int64_t>(r + s, 0));
  for (std::size_t i = 0; i < r; ++i) {
    rel[i][i] = g.orders()[i];
    for (std::size_t j = 0; j < s; ++j) rel[i][r + j] = h.generators()[j][i];
  }
  const SmithForm f = smith_normal_form(rel, r, r + s);

  std::vector<std::int64_t> orders;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < r; ++i) {
    if (f.invariants[i] > 1) {
      orders.push_back(f.invariants[i]);
      keep.push_back(i);
    }
  }
  Quotient q;
  q.group = FinAbGroup(orders);
  IntMatrix proj;
  for (std::size_t i : keep) proj.push_back(f.left[i]);
  q.projection = Homomorphism(g, q.group, std::move(proj));
  for (std::size_t i : keep) {
    Element lift(r);
    for (std::size_t k = 0; k < r; ++k) lift[k] = f.left_inv[k][i];
    q.lifts.push_back(g.reduce(lift));
  }
  return q;
}

Presentation presentation(const Subgroup& h) {
  const FinAbGroup& g = h.parent();
  const std::size_t r = g.num_factors();
  const std::size_t s = h.generators().size();
  Presentation out;
  if (s == 0 || h.order() == 1) {
    out.group = FinAbGroup();
    out.embedding = Homomorphism::zero(out.group, g);
    return out;
  }
  // Kernel lattice of Z^s -> G, x |-> sum x_j g_j: project ker [M | diag(m)].
  IntMatrix k(r, std::vector<std::int64_t>(s + r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < s; ++j) k[i][j] = h.generators()[j][i];
    k[i][s + i] = g.orders()[i];
  }
  const SmithForm fk = smith_normal_form(k, r, s + r);
  IntMatrix lattice(s, std::vector<std::int64_t>(s + r - fk.rank, 0));
  for (std::size_t c = fk.rank; c < s + r; ++c) {
    for (std::size_t j = 0; j < s; ++j) lattice[j][c - fk.rank] = fk.right[j][c];
  }
  const SmithForm fl = smith_normal_form(lattice, s, s + r - fk.rank);

  std::vector<std::int64_t> orders;
  std::vector<Element> images;
  for (std::size_t i = 0; i < s; ++i) {
    const std::int64_t e = i < fl.invariants.size() ? fl.invariants[i] : 0;
    if (e == 0) throw InvariantViolation("subgroup presentation produced an infinite factor");
    if (e == 1) continue;
    orders.push_back(e);
    Element img(r, 0);
    for (std::size_t j = 0; j < s; ++j) {
      const std::int64_t coef = fl.left_inv[j][i];
      for (std::size_t t = 0; t < r; ++t) {
        img[t] = mod_floor(img[t] + mod_floor(coef, g.orders()[t]) * h.generators()[j][t], g.orders()[t]);
      }
    }
    images.push_back(img);
  }
  out.group = FinAbGroup(orders);
  out.embedding = Homomorphism::from_images(out.group, g, images);
  return out;
}

std::vector<std::int64_t> invariant_factors(const FinAbGroup& g) {
  const std::size_t r = g.num_factors();
  IntMatrix d(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i) d[i][i] = g.orders()[i];
  const SmithForm f = smith_normal_form(d, r, r);
  std::vector<std::int64_t> out;
  for (auto v : f.invariants) {
    if (v > 1) out.push_back(v);
  }
  return out;
}

std::size_t minimal_rank(const FinAbGroup& g) { return invariant_factors(g).size(); }

// ----------------------------------------------------- primary decomposition

Homomorphism PrimaryDecomposition::projection(std::int64_t p) const {
  const FinAbGroup& c = components.at(p);
  const std::size_t off = offset.at(p);
  IntMatrix m;
  for (std::size_t i = 0; i < c.num_factors(); ++i) m.push_back(iso.matrix()[off + i]);
  return Homomorphism(parent, c, std::move(m));
}

Homomorphism PrimaryDecomposition::injection(std::int64_t p) const {
  const FinAbGroup& c = components.at(p);
  const std::size_t off = offset.at(p);
  IntMatrix m(parent.num_factors(), std::vector<std::int64_t>(c.num_factors(), 0));
  for (std::size_t i = 0; i < parent.num_factors(); ++i) {
    for (std::size_t j = 0; j < c.num_factors(); ++j) m[i][j] = inverse.matrix()[i][off + j];
  }
  return Homomorphism(c, parent, std::move(m));
}

PrimaryDecomposition primary_decompose(const FinAbGroup& g) {
  PrimaryDecomposition pd;
  pd.parent = g;
  for (const auto& [p, e] : factorize(g.torsion())) {
    (void)e;
    pd.primes.push_back(p);
  }
  std::vector<std::int64_t> product_orders;
  // (row in product) -> (parent coordinate, prime power, cofactor)
  struct Part {
    std::size_t coord;
    std::int64_t power;
  };
  std::vector<Part> parts;
  for (std::int64_t p : pd.primes) {
    std::vector<std::int64_t> comp;
    pd.offset[p] = product_orders.size();
    for (std::size_t j = 0; j < g.num_factors(); ++j) {
      std::int64_t q = 1;
      std::int64_t m = g.orders()[j];
      while (m % p == 0) {
        m /= p;
        q *= p;
      }
      if (q == 1) continue;
      comp.push_back(q);
      product_orders.push_back(q);
      parts.push_back({j, q});
    }
    pd.components[p] = FinAbGroup(comp);
  }
  pd.product = FinAbGroup(product_orders);

  IntMatrix fwd(parts.size(), std::vector<std::int64_t>(g.num_factors(), 0));
  IntMatrix back(g.num_factors(), std::vector<std::int64_t>(parts.size(), 0));
  for (std::size_t row = 0; row < parts.size(); ++row) {
    const auto [j, q] = parts[row];
    const std::int64_t m = g.orders()[j];
    const std::int64_t cof = m / q;
    fwd[row][j] = 1;
    // CRT idempotent: ≡ 1 mod q, ≡ 0 mod m/q.
    back[j][row] = mod_floor(cof * mod_inverse(cof % q, q), m);
  }
  pd.iso = Homomorphism(g, pd.product, std::move(fwd));
  pd.inverse = Homomorphism(pd.product, g, std::move(back));
  // Exhaustive bijection check at desk scale.
  if (g.order() <= (std::uint64_t{1} << 20)) {
    for (Code x = 0; x < g.order(); ++x) {
      if (pd.inverse.apply_code(pd.iso.apply_code(x)) != x) {
        throw InvariantViolation("primary decomposition iso does not invert");
      }
    }
  }
  return pd;
}

// --------------------------------------------------------------- complements

bool is_complement(const Subgroup& h, const Subgroup& k) {
  if (h.parent() != k.parent()) return false;
  if (h.order() * k.order() != h.parent().order()) return false;
  if (intersect(h, k).order() != 1) return false;
  return sum(h, k).order() == h.parent().order();
}

std::optional<Subgroup> find_complement(const Subgroup& h, std::uint64_t cap) {
  const FinAbGroup& a = h.parent();
  const Quotient q = quotient(h);
  const std::uint64_t work = q.group.num_factors() * h.order();
  if (work > cap) throw CapExceeded("find_complement", work, cap);

  std::vector<Element> section;
  for (std::size_t i = 0; i < q.group.num_factors(); ++i) {
    const std::int64_t d = q.group.orders()[i];
    const Element& base = q.lifts[i];
    std::optional<Code> best;
    for (Code hc : h.elements()) {
      const Element cand = a.add(base, a.decode(hc));
      if (a.scale(d, cand) != a.zero()) continue;
      const Code c = a.encode(cand);
      if (!best || c < *best) best = c;
    }
    if (!best) return std::nullopt;
    section.push_back(a.decode(*best));
  }
  Subgroup k = Subgroup::generated(a, std::move(section));
  if (!is_complement(h, k)) throw InvariantViolation("section image is not a complement");
  return k;
}

}  // namespace hofa
