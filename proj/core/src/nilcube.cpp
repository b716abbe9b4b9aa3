#include "hofa/nilcube.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace hofa {

// ------------------------------------------------------- nilspace, cubes

FilteredGroupNilspace::FilteredGroupNilspace(std::vector<std::pair<std::int64_t, int>> factors)
    : factors_(std::move(factors)) {
  std::vector<std::int64_t> orders;
  for (const auto& [m, d] : factors_) {
    if (d < 1) throw ValidationError("nilspace factor degree must be >= 1");
    orders.push_back(m);
    step_ = std::max(step_, d);
  }
  group_ = FinAbGroup(std::move(orders));
}

FilteredGroupNilspace FilteredGroupNilspace::uniform(const FinAbGroup& a, int d) {
  std::vector<std::pair<std::int64_t, int>> f;
  for (auto m : a.orders()) f.emplace_back(m, d);
  return FilteredGroupNilspace(std::move(f));
}

FilteredGroupNilspace FilteredGroupNilspace::product(const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2) {
  auto f = y1.factors_;
  f.insert(f.end(), y2.factors_.begin(), y2.factors_.end());
  return FilteredGroupNilspace(std::move(f));
}

CubeSet::CubeSet(FilteredGroupNilspace x, int n, std::uint64_t cap) : x_(std::move(x)), n_(n), cap_(cap) {
  if (n < 0 || n > 16) throw ValidationError("cube dimension must be in [0, 16]");
  const std::uint32_t nv = std::uint32_t{1} << n;
  for (const auto& [m, d] : x_.factors()) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t s = 0; s < nv; ++s) {
      if (std::popcount(s) <= d) masks.push_back(s);
    }
    const std::uint64_t c = saturating_pow(static_cast<std::uint64_t>(m), masks.size());
    factor_counts_.push_back(c);
    size_ = (c != 0 && size_ > std::numeric_limits<std::uint64_t>::max() / c) ? std::numeric_limits<std::uint64_t>::max()
                                                                               : size_ * c;
    monomials_.push_back(std::move(masks));
  }
}

void CubeSet::require_enumerable() const {
  if (size_ > cap_) throw CapExceeded("cube enumeration", size_, cap_);
}

Cube CubeSet::cube(std::uint64_t index) const {
  require_enumerable();
  if (index >= size_) throw ValidationError("cube index out of range");
  const FinAbGroup& g = x_.group();
  const std::size_t r = g.num_factors();
  std::vector<Element> pts(vertices(), Element(r, 0));
  for (std::size_t j = r; j-- > 0;) {
    std::uint64_t p = index % factor_counts_[j];
    index /= factor_counts_[j];
    const std::int64_t m = g.orders()[j];
    const auto& masks = monomials_[j];
    for (std::size_t t = masks.size(); t-- > 0;) {
      const std::int64_t a = static_cast<std::int64_t>(p % static_cast<std::uint64_t>(m));
      p /= static_cast<std::uint64_t>(m);
      if (a == 0) continue;
      for (std::size_t w = 0; w < vertices(); ++w) {
        if ((w & masks[t]) == masks[t]) pts[w][j] = (pts[w][j] + a) % m;
      }
    }
  }
  Cube q(vertices());
  for (std::size_t w = 0; w < q.size(); ++w) q[w] = g.encode(pts[w]);
  return q;
}

std::optional<std::uint64_t> CubeSet::index_of(const Cube& q) const {
  if (q.size() != vertices()) return std::nullopt;
  const FinAbGroup& g = x_.group();
  std::vector<Element> pts;
  for (Code c : q) {
    if (c >= g.order()) return std::nullopt;
    pts.push_back(g.decode(c));
  }
  std::uint64_t index = 0;
  for (std::size_t j = 0; j < g.num_factors(); ++j) {
    const std::int64_t m = g.orders()[j];
    // Möbius inversion: a_S = Σ_{T ⊆ S} (-1)^{|S|-|T|} q(T).
    std::vector<std::int64_t> a(vertices());
    for (std::size_t w = 0; w < vertices(); ++w) a[w] = pts[w][j];
    for (int i = 0; i < n_; ++i) {
      for (std::size_t w = 0; w < vertices(); ++w) {
        if (w & (std::size_t{1} << i)) a[w] = mod_floor(a[w] - a[w ^ (std::size_t{1} << i)], m);
      }
    }
    const int d = x_.factors()[j].second;
    for (std::size_t w = 0; w < vertices(); ++w) {
      if (std::popcount(w) > d && a[w] != 0) return std::nullopt;
    }
    std::uint64_t p = 0;
    for (std::uint32_t s : monomials_[j]) p = p * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(a[s]);
    index = index * factor_counts_[j] + p;
  }
  return index;
}

bool CubeSet::contains(const Cube& q) const {
  if (q.size() != vertices()) return false;
  const FinAbGroup& g = x_.group();
  std::vector<Element> pts;
  for (Code c : q) {
    if (c >= g.order()) return false;
    pts.push_back(g.decode(c));
  }
  const std::uint32_t nv = static_cast<std::uint32_t>(vertices());
  for (std::size_t j = 0; j < g.num_factors(); ++j) {
    const int d = x_.factors()[j].second;
    if (d >= n_) continue;
    const std::int64_t m = g.orders()[j];
    // Faces: a free set F with |F| = d+1 and a base point off F.
    for (std::uint32_t f = 0; f < nv; ++f) {
      if (std::popcount(f) != d + 1) continue;
      for (std::uint32_t base = 0; base < nv; ++base) {
        if (base & f) continue;
        std::int64_t s = 0;
        for (std::uint32_t sub = f;; sub = (sub - 1) & f) {
          const std::int64_t v = pts[base | sub][j];
          s += (std::popcount(sub) % 2) ? -v : v;
          if (sub == 0) break;
        }
        if (mod_floor(s, m) != 0) return false;
      }
    }
  }
  return true;
}

std::vector<std::uint64_t> CubeSet::rooted(Code y) const {
  require_enumerable();
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < size_; ++i) {
    if (cube(i)[0] == y) out.push_back(i);
  }
  return out;
}

std::string CubeSet::vertex_code(const Cube& q) const {
  boost::multiprecision::cpp_int c = 0;
  for (Code v : q) c = c * x_.size() + v;
  return c.str();
}

// ------------------------------------------------------------- cocycles

namespace {

std::vector<Cube> materialize(const CubeSet& cs) {
  std::vector<Cube> all;
  all.reserve(cs.size());
  for (std::uint64_t i = 0; i < cs.size(); ++i) all.push_back(cs.cube(i));
  return all;
}

bool all_zero(const std::vector<Element>& t) {
  return std::all_of(t.begin(), t.end(), [](const Element& e) {
    return std::all_of(e.begin(), e.end(), [](std::int64_t v) { return v == 0; });
  });
}

// Vertex map for the coordinate permutation σ: (q∘σ)(v) = q(σ v).
std::vector<std::size_t> permute_vertices(const std::vector<int>& perm) {
  const std::size_t nv = std::size_t{1} << perm.size();
  std::vector<std::size_t> out(nv);
  for (std::size_t w = 0; w < nv; ++w) {
    std::size_t img = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (w & (std::size_t{1} << i)) img |= std::size_t{1} << perm[i];
    }
    out[w] = img;
  }
  return out;
}

std::uint64_t coprime_count_check(const FilteredGroupNilspace& y1, const FinAbGroup& z) {
  if (gcd64(static_cast<std::int64_t>(y1.size() % z.order()), static_cast<std::int64_t>(z.order())) != 1 &&
      z.order() != 1) {
    throw HypothesisError("coprime averaging needs gcd(|Y1|, |Z|) = 1, got |Y1| = " + std::to_string(y1.size()) +
                          ", |Z| = " + std::to_string(z.order()));
  }
  return y1.size();
}

void require_product(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2) {
  if (!(rho.space == FilteredGroupNilspace::product(y1, y2))) {
    throw ValidationError("cocycle does not live on Y1 x Y2");
  }
}

}  // namespace

Cocycle coboundary(const FilteredGroupNilspace& x, const std::vector<Element>& g, const FinAbGroup& z, int n) {
  if (g.size() != x.size()) throw ValidationError("coboundary: g must be given on every point");
  for (const auto& v : g) z.check(v);
  const CubeSet cs(x, n);
  Cocycle out{x, n, z, {}};
  out.table.reserve(cs.size());
  for (std::uint64_t i = 0; i < cs.size(); ++i) {
    const Cube q = cs.cube(i);
    Element acc = z.zero();
    for (std::size_t w = 0; w < q.size(); ++w) {
      acc = (std::popcount(w) % 2) ? z.sub(acc, g[q[w]]) : z.add(acc, g[q[w]]);
    }
    out.table.push_back(std::move(acc));
  }
  return out;
}

Cocycle pullback(const Cocycle& kappa, const FilteredGroupNilspace& y1) {
  const FilteredGroupNilspace y = FilteredGroupNilspace::product(y1, kappa.space);
  const std::uint64_t s1 = CubeSet(y1, kappa.dimension).size();
  const std::uint64_t s2 = kappa.table.size();
  Cocycle out{y, kappa.dimension, kappa.codomain, {}};
  out.table.reserve(s1 * s2);
  for (std::uint64_t i1 = 0; i1 < s1; ++i1) {
    for (std::uint64_t i2 = 0; i2 < s2; ++i2) out.table.push_back(kappa.table[i2]);
  }
  return out;
}

Cocycle add(const Cocycle& a, const Cocycle& b) {
  if (!(a.space == b.space) || a.dimension != b.dimension || a.codomain != b.codomain) {
    throw ValidationError("sum of cocycles on different cube sets");
  }
  Cocycle out = a;
  for (std::size_t i = 0; i < out.table.size(); ++i) out.table[i] = a.codomain.add(a.table[i], b.table[i]);
  return out;
}

CocycleCheck check_cocycle(const Cocycle& rho) {
  const CubeSet cs(rho.space, rho.dimension);
  if (rho.table.size() != cs.size()) throw ValidationError("cocycle table does not cover the cube set");
  const FinAbGroup& z = rho.codomain;
  const std::vector<Cube> all = materialize(cs);
  const int n = rho.dimension;
  const std::size_t nv = cs.vertices();
  CocycleCheck out;

  out.additive = true;
  for (int i = 0; i < n && out.additive; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    // Group cubes by their lower face along direction i.
    std::map<std::vector<Code>, std::vector<std::uint64_t>> by_lower;
    for (std::uint64_t k = 0; k < all.size(); ++k) {
      std::vector<Code> face;
      for (std::size_t w = 0; w < nv; ++w) {
        if (!(w & bit)) face.push_back(all[k][w]);
      }
      by_lower[face].push_back(k);
    }
    for (std::uint64_t k = 0; k < all.size() && out.additive; ++k) {
      std::vector<Code> upper;
      for (std::size_t w = 0; w < nv; ++w) {
        if (w & bit) upper.push_back(all[k][w]);
      }
      auto it = by_lower.find(upper);
      if (it == by_lower.end()) continue;
      for (std::uint64_t k2 : it->second) {
        Cube cat(nv);
        for (std::size_t w = 0; w < nv; ++w) cat[w] = (w & bit) ? all[k2][w] : all[k][w];
        const auto idx = cs.index_of(cat);
        if (!idx || rho.table[*idx] != z.add(rho.table[k], rho.table[k2])) {
          out.additive = false;
          break;
        }
      }
    }
  }

  out.permutation_invariant = true;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end()) && out.permutation_invariant) {
    const auto vm = permute_vertices(perm);
    for (std::uint64_t k = 0; k < all.size(); ++k) {
      Cube img(nv);
      for (std::size_t w = 0; w < nv; ++w) img[w] = all[k][vm[w]];
      const auto idx = cs.index_of(img);
      if (!idx || rho.table[*idx] != rho.table[k]) {
        out.permutation_invariant = false;
        break;
      }
    }
  }

  bool plus = true, minus = true;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::uint64_t k = 0; k < all.size(); ++k) {
      Cube img(nv);
      for (std::size_t w = 0; w < nv; ++w) img[w] = all[k][w ^ bit];
      const auto idx = cs.index_of(img);
      if (!idx) {
        plus = minus = false;
        break;
      }
      plus = plus && rho.table[*idx] == rho.table[k];
      minus = minus && rho.table[*idx] == z.neg(rho.table[k]);
    }
  }
  if (minus) {
    out.reflection_sign = -1;
  } else if (plus) {
    out.reflection_sign = 1;
  }
  return out;
}

// ---------------------------------------------------------- averaging

Element avg_coprime(const FinAbGroup& z, const Element& sum, std::uint64_t n) {
  z.check(sum);
  if (n == 0) throw ValidationError("average over an empty set");
  const auto ord = static_cast<std::int64_t>(z.order());
  if (ord > 1 && gcd64(static_cast<std::int64_t>(n % static_cast<std::uint64_t>(ord)), ord) != 1) {
    throw HypothesisError("avg_coprime: gcd(" + std::to_string(n) + ", " + std::to_string(ord) + ") != 1");
  }
  Element out(sum.size());
  for (std::size_t j = 0; j < sum.size(); ++j) {
    const std::int64_t m = z.orders()[j];
    const std::int64_t inv = mod_inverse(static_cast<std::int64_t>(n % static_cast<std::uint64_t>(m)), m);
    out[j] = mod_floor(checked_mul(sum[j], inv), m);
  }
  return out;
}

Element avg_coprime(const FinAbGroup& z, const std::vector<Element>& values) {
  Element s = z.zero();
  for (const auto& v : values) s = z.add(s, z.reduce(v));
  return avg_coprime(z, s, values.size());
}

Cocycle average_E(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2) {
  require_product(rho, y1, y2);
  coprime_count_check(y1, rho.codomain);
  const FinAbGroup& z = rho.codomain;
  const std::uint64_t s1 = CubeSet(y1, rho.dimension).size();
  const std::uint64_t s2 = CubeSet(y2, rho.dimension).size();
  Cocycle out = rho;
  for (std::uint64_t i2 = 0; i2 < s2; ++i2) {
    Element acc = z.zero();
    for (std::uint64_t i1 = 0; i1 < s1; ++i1) acc = z.add(acc, rho.table[i1 * s2 + i2]);
    const Element avg = avg_coprime(z, acc, s1);
    for (std::uint64_t i1 = 0; i1 < s1; ++i1) out.table[i1 * s2 + i2] = avg;
  }
  return out;
}

Cocycle rooted_average_Eprime(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2) {
  require_product(rho, y1, y2);
  coprime_count_check(y1, rho.codomain);
  const FinAbGroup& z = rho.codomain;
  const CubeSet c1(y1, rho.dimension);
  const std::uint64_t s1 = c1.size();
  const std::uint64_t s2 = CubeSet(y2, rho.dimension).size();

  std::vector<std::vector<std::uint64_t>> by_root(y1.size());
  std::vector<Code> root_of(s1);
  for (std::uint64_t i1 = 0; i1 < s1; ++i1) {
    root_of[i1] = c1.cube(i1)[0];
    by_root[root_of[i1]].push_back(i1);
  }
  Cocycle out = rho;
  for (Code y = 0; y < y1.size(); ++y) {
    const auto& rs = by_root[y];
    for (std::uint64_t i2 = 0; i2 < s2; ++i2) {
      Element acc = z.zero();
      for (std::uint64_t r : rs) acc = z.add(acc, rho.table[r * s2 + i2]);
      const Element avg = avg_coprime(z, acc, rs.size());
      for (std::uint64_t r : rs) out.table[r * s2 + i2] = avg;
    }
  }
  return out;
}

SplitResult split_cocycle(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2) {
  require_product(rho, y1, y2);
  coprime_count_check(y1, rho.codomain);
  if (!is_cocycle(rho)) throw HypothesisError("split_cocycle: input fails the cocycle checks");
  const FinAbGroup& z = rho.codomain;

  SplitResult out;
  out.kappa = average_E(rho, y1, y2);
  const Cocycle ep = rooted_average_Eprime(rho, y1, y2);

  const CubeSet cs(rho.space, rho.dimension);
  std::vector<std::optional<Element>> g(rho.space.size());
  for (std::uint64_t i = 0; i < cs.size(); ++i) {
    const Code root = cs.cube(i)[0];
    Element v = z.sub(ep.table[i], out.kappa.table[i]);
    if (!g[root]) {
      g[root] = std::move(v);
    } else if (*g[root] != v) {
      throw InvariantViolation("split_cocycle: E'(ρ) - E(ρ) depends on more than the root");
    }
  }
  for (auto& v : g) {
    if (!v) throw InvariantViolation("split_cocycle: a point roots no cube");
    out.g.push_back(std::move(*v));
  }

  const Cocycle sigma = coboundary(rho.space, out.g, z, rho.dimension);
  out.residual.reserve(cs.size());
  for (std::uint64_t i = 0; i < cs.size(); ++i) {
    out.residual.push_back(z.sub(z.sub(rho.table[i], out.kappa.table[i]), sigma.table[i]));
  }
  out.residual_zero = all_zero(out.residual);

  const std::uint64_t s2 = CubeSet(y2, rho.dimension).size();
  out.kappa_factors = true;
  for (std::uint64_t i = 0; i < cs.size() && out.kappa_factors; ++i) {
    out.kappa_factors = out.kappa.table[i] == out.kappa.table[i % s2];
  }
  return out;
}

// ------------------------------------------------------------ morphisms

namespace {

struct MorphismChecker {
  std::vector<std::vector<Cube>> source;  // cubes of X by dimension
  std::vector<CubeSet> target;

  MorphismChecker(const FilteredGroupNilspace& x, const FilteredGroupNilspace& y, int max_dim) {
    for (int n = 1; n <= max_dim; ++n) {
      source.push_back(materialize(CubeSet(x, n)));
      target.emplace_back(y, n);
    }
  }

  bool check(const std::vector<Code>& f) const {
    for (std::size_t d = 0; d < source.size(); ++d) {
      for (const auto& q : source[d]) {
        Cube img(q.size());
        for (std::size_t w = 0; w < q.size(); ++w) img[w] = f[q[w]];
        if (!target[d].contains(img)) return false;
      }
    }
    return true;
  }
};

}  // namespace

bool is_morphism(const std::vector<Code>& f, const FilteredGroupNilspace& x, const FilteredGroupNilspace& y,
                 std::optional<int> max_dim) {
  if (f.size() != x.size()) throw ValidationError("is_morphism: map must be given on every point");
  for (Code c : f) {
    if (c >= y.size()) throw ValidationError("is_morphism: value outside the target");
  }
  return MorphismChecker(x, y, max_dim.value_or(y.step() + 1)).check(f);
}

std::vector<std::vector<Code>> enumerate_morphisms(const FilteredGroupNilspace& x, const FilteredGroupNilspace& y,
                                                   std::optional<int> max_dim, std::uint64_t cap) {
  const std::uint64_t total = saturating_pow(y.size(), x.size());
  if (total > cap) throw CapExceeded("enumerate_morphisms", total, cap);
  const MorphismChecker checker(x, y, max_dim.value_or(y.step() + 1));
  std::vector<std::vector<Code>> out;
  std::vector<Code> f(x.size(), 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t r = t;
    for (std::size_t i = f.size(); i-- > 0;) {
      f[i] = r % y.size();
      r /= y.size();
    }
    if (checker.check(f)) out.push_back(f);
  }
  return out;
}

}  // namespace hofa
