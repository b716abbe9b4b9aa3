#pragma once

// Brute-force oracles and seeded generators shared by the unit and
// acceptance tests.  Nothing here calls the library code it is meant to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "hofa/complements.hpp"
#include "hofa/harmonics.hpp"
#include "hofa/nilcube.hpp"
#include "hofa/polymaps.hpp"

namespace hofa::testing {

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Random p-group with |A| <= p^max_exp and torsion <= p^max_n.
inline FinAbGroup random_p_group(std::mt19937_64& rng, std::int64_t p, int max_exp, int max_n) {
  int budget = static_cast<int>(draw(rng, 1, max_exp));
  std::vector<std::int64_t> orders;
  while (budget > 0) {
    const int e = static_cast<int>(draw(rng, 1, std::min(budget, max_n)));
    std::int64_t o = 1;
    for (int i = 0; i < e; ++i) o *= p;
    orders.push_back(o);
    budget -= e;
  }
  std::shuffle(orders.begin(), orders.end(), rng);
  return FinAbGroup(orders);
}

/// Random group with cyclic factors from `pool`, order at most max_order.
inline FinAbGroup random_group(std::mt19937_64& rng, const std::vector<std::int64_t>& pool, std::uint64_t max_order,
                               std::size_t max_factors = 3) {
  std::vector<std::int64_t> orders;
  std::uint64_t size = 1;
  const std::size_t want = static_cast<std::size_t>(draw(rng, 1, static_cast<std::int64_t>(max_factors)));
  for (std::size_t tries = 0; orders.size() < want && tries < 20; ++tries) {
    const std::int64_t o = pool[rng() % pool.size()];
    if (size * static_cast<std::uint64_t>(o) > max_order) continue;
    orders.push_back(o);
    size *= static_cast<std::uint64_t>(o);
  }
  if (orders.empty()) orders.push_back(pool.front());
  return FinAbGroup(orders);
}

inline Element random_element(std::mt19937_64& rng, const FinAbGroup& g) {
  Element e(g.num_factors());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = draw(rng, 0, g.orders()[i] - 1);
  return e;
}

/// Random well-defined homomorphism: entry (i, j) is a multiple of a_i / gcd(a_i, b_j).
inline Homomorphism random_hom(std::mt19937_64& rng, const FinAbGroup& b, const FinAbGroup& a) {
  IntMatrix m(a.num_factors(), std::vector<std::int64_t>(b.num_factors()));
  for (std::size_t i = 0; i < a.num_factors(); ++i) {
    for (std::size_t j = 0; j < b.num_factors(); ++j) {
      const std::int64_t step = a.orders()[i] / std::gcd(a.orders()[i], b.orders()[j]);
      m[i][j] = step * draw(rng, 0, a.orders()[i] / step - 1);
    }
  }
  return Homomorphism(b, a, m);
}

/// Closure of generators by breadth-first addition, as a set of element vectors.
inline std::set<Element> closure(const FinAbGroup& g, const std::vector<Element>& gens) {
  std::set<Element> seen{g.zero()};
  std::vector<Element> frontier{g.zero()};
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        Element y(x.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = (x[i] + s[i]) % g.orders()[i];
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

inline std::vector<Element> all_elements(const FinAbGroup& g) {
  std::vector<Element> out;
  for (Code c = 0; c < g.order(); ++c) out.push_back(g.decode(c));
  return out;
}

inline std::set<Element> as_set(const Subgroup& s) {
  std::set<Element> out;
  for (Code c : s.elements()) out.insert(s.parent().decode(c));
  return out;
}

/// Every a decomposes uniquely as h + k.
inline bool unique_decomposition(const FinAbGroup& g, const std::set<Element>& h, const std::set<Element>& k) {
  std::vector<int> hits(g.order(), 0);
  for (const auto& x : h) {
    for (const auto& y : k) {
      Element s(x.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = (x[i] + y[i]) % g.orders()[i];
      ++hits[g.encode(s)];
    }
  }
  return std::all_of(hits.begin(), hits.end(), [](int v) { return v == 1; });
}

/// Whether some subgroup generated by at most `rank` elements complements h.
inline bool complement_exists_by_search(const FinAbGroup& g, const std::set<Element>& h, std::size_t rank) {
  const auto elems = all_elements(g);
  const std::size_t need = g.order() / h.size();
  std::set<std::set<Element>> tried;
  std::function<bool(std::vector<Element>&, std::size_t)> go = [&](std::vector<Element>& gens, std::size_t from) {
    const auto k = closure(g, gens);
    if (k.size() == need && tried.insert(k).second && unique_decomposition(g, h, k)) return true;
    if (gens.size() == rank) return false;
    for (std::size_t i = from; i < elems.size(); ++i) {
      gens.push_back(elems[i]);
      if (go(gens, i + 1)) return true;
      gens.pop_back();
    }
    return false;
  };
  std::vector<Element> gens;
  return go(gens, 0);
}

/// Minimal d such that every (d+1)-fold derivative along arbitrary directions vanishes,
/// searched up to max_d; -1 if none.
inline int brute_degree(const PolyMap& p, int max_d) {
  const FinAbGroup& g = p.domain();
  const FinAbGroup& z = p.codomain();
  for (int d = 0; d <= max_d; ++d) {
    const int n = d + 1;
    std::vector<Code> hs(static_cast<std::size_t>(n), 0);
    bool all_zero = true;
    while (all_zero) {
      for (Code x = 0; x < g.order() && all_zero; ++x) {
        Element acc = z.zero();
        for (std::uint32_t w = 0; w < (1u << n); ++w) {
          Element pt = g.decode(x);
          for (int i = 0; i < n; ++i) {
            if (w & (1u << i)) pt = g.add(pt, g.decode(hs[static_cast<std::size_t>(i)]));
          }
          const Element v = p(pt);
          acc = ((n - __builtin_popcount(w)) % 2) ? z.sub(acc, v) : z.add(acc, v);
        }
        all_zero = acc == z.zero();
      }
      std::size_t i = 0;
      while (i < hs.size() && ++hs[i] == g.order()) hs[i++] = 0;
      if (i == hs.size()) break;
    }
    if (all_zero) return d;
  }
  return -1;
}

/// ∥f∥_{U^k}^{2^k} straight from the definition: E over x and k directions.
inline double brute_gowers_power(const GroupFunction& f, int k) {
  const FinAbGroup& g = f.group();
  std::vector<Code> hs(static_cast<std::size_t>(k), 0);
  std::complex<double> total = 0;
  std::uint64_t count = 0;
  while (true) {
    for (Code x = 0; x < g.order(); ++x) {
      std::complex<double> prod = 1;
      for (std::uint32_t w = 0; w < (1u << k); ++w) {
        Element pt = g.decode(x);
        for (int i = 0; i < k; ++i) {
          if (w & (1u << i)) pt = g.add(pt, g.decode(hs[static_cast<std::size_t>(i)]));
        }
        const auto v = f[g.encode(pt)];
        prod *= (__builtin_popcount(w) % 2) ? std::conj(v) : v;
      }
      total += prod;
      ++count;
    }
    std::size_t i = 0;
    while (i < hs.size() && ++hs[i] == g.order()) hs[i++] = 0;
    if (i == hs.size()) break;
  }
  return total.real() / static_cast<double>(count);
}

/// Naive DFT coefficients f̂(χ) = E_x f(x) conj(χ(x)).
inline std::vector<std::complex<double>> dft(const GroupFunction& f) {
  const FinAbGroup& g = f.group();
  std::vector<std::complex<double>> out(g.order());
  for (Code c = 0; c < g.order(); ++c) {
    const Element chi = g.decode(c);
    std::complex<double> s = 0;
    for (Code x = 0; x < g.order(); ++x) {
      const Element e = g.decode(x);
      double t = 0;
      for (std::size_t i = 0; i < e.size(); ++i) t += static_cast<double>(chi[i] * e[i]) / static_cast<double>(g.orders()[i]);
      s += f[x] * std::polar(1.0, -2 * M_PI * t);
    }
    out[c] = s / static_cast<double>(g.order());
  }
  return out;
}

inline GroupFunction random_bounded(std::mt19937_64& rng, const FinAbGroup& g) {
  std::vector<Complex> v(g.order());
  for (auto& z : v) z = std::polar(std::sqrt(unit_double(rng)), 2 * M_PI * unit_double(rng));
  return GroupFunction::from_values(g, std::move(v));
}

inline GroupFunction random_signs(std::mt19937_64& rng, const FinAbGroup& g) {
  std::vector<std::int64_t> nums(g.order());
  for (auto& a : nums) a = static_cast<std::int64_t>(rng() >> 63);
  return GroupFunction::from_phases(g, 2, std::move(nums));
}

inline GroupFunction bilinear(int l) {
  const FinAbGroup g(std::vector<std::int64_t>(static_cast<std::size_t>(2 * l), 2));
  std::vector<std::int64_t> nums(g.order());
  for (Code c = 0; c < g.order(); ++c) {
    const Element x = g.decode(c);
    std::int64_t s = 0;
    for (int i = 0; i < l; ++i) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + l)];
    nums[c] = s % 2;
  }
  return GroupFunction::from_phases(g, 2, std::move(nums));
}

/// ∥f∥_□ by the literal 4-cycle sum over a1, a2 in the first `split` coordinates and b1, b2 in the rest.
inline double brute_box(const GroupFunction& f, std::size_t split) {
  const FinAbGroup& g = f.group();
  std::uint64_t na = 1;
  for (std::size_t i = 0; i < split; ++i) na *= static_cast<std::uint64_t>(g.orders()[i]);
  const std::uint64_t nb = g.order() / na;
  std::complex<double> s = 0;
  for (std::uint64_t a1 = 0; a1 < na; ++a1)
    for (std::uint64_t a2 = 0; a2 < na; ++a2)
      for (std::uint64_t b1 = 0; b1 < nb; ++b1)
        for (std::uint64_t b2 = 0; b2 < nb; ++b2)
          s += f[a1 * nb + b1] * std::conj(f[a2 * nb + b1]) * std::conj(f[a1 * nb + b2]) * f[a2 * nb + b2];
  const double v = s.real() / static_cast<double>(na * na * nb * nb);
  return std::pow(std::max(v, 0.0), 0.25);
}

/// Host–Kra membership by the literal face condition, written independently of CubeSet.
inline bool brute_is_cube(const FilteredGroupNilspace& x, int n, const std::vector<Element>& pts) {
  const std::uint32_t nv = 1u << n;
  for (std::size_t j = 0; j < x.factors().size(); ++j) {
    const auto [m, d] = x.factors()[j];
    if (d + 1 > n) continue;
    // a face: choose d+1 free directions and values on the rest
    for (std::uint32_t free = 0; free < nv; ++free) {
      if (__builtin_popcount(free) != d + 1) continue;
      for (std::uint32_t fixed = 0; fixed < nv; ++fixed) {
        if (fixed & free) continue;
        std::int64_t s = 0;
        for (std::uint32_t v = 0; v < nv; ++v) {
          if ((v & ~free) != fixed) continue;
          const std::int64_t sign = (__builtin_popcount(v & free) % 2) ? -1 : 1;
          s += sign * pts[v][j];
        }
        if (((s % m) + m) % m != 0) return false;
      }
    }
  }
  return true;
}

/// All cubes of C^n(X) found by scanning every map {0,1}^n -> X.
inline std::vector<Cube> brute_cubes(const FilteredGroupNilspace& x, int n) {
  const FinAbGroup& g = x.group();
  const std::size_t nv = std::size_t{1} << n;
  std::vector<Cube> out;
  Cube q(nv, 0);
  while (true) {
    std::vector<Element> pts;
    for (Code c : q) pts.push_back(g.decode(c));
    if (brute_is_cube(x, n, pts)) out.push_back(q);
    std::size_t i = 0;
    while (i < nv && ++q[i] == g.order()) q[i++] = 0;
    if (i == nv) break;
  }
  return out;
}

inline std::vector<Element> random_point_function(std::mt19937_64& rng, std::uint64_t points, const FinAbGroup& z) {
  std::vector<Element> g(points);
  for (auto& e : g) e = random_element(rng, z);
  return g;
}

}  // namespace hofa::testing
