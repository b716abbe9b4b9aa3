#include "hofa/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hofa {

namespace {

Complex unit_phase(std::int64_t a, std::int64_t n) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(mod_floor(a, n)) / static_cast<double>(n);
  return {std::cos(t), std::sin(t)};
}

// Code of x + h for every x, using cached digits.
class Shifter {
 public:
  explicit Shifter(const FinAbGroup& g) : g_(g), digits_(g.order() * g.num_factors()) {
    for (Code x = 0; x < g.order(); ++x) {
      const Element e = g.decode(x);
      std::copy(e.begin(), e.end(), digits_.begin() + static_cast<std::ptrdiff_t>(x * e.size()));
    }
    strides_.assign(g.num_factors(), 1);
    for (std::size_t j = g.num_factors(); j-- > 1;) strides_[j - 1] = strides_[j] * g.orders()[j];
  }

  void shift(Code h, std::vector<Code>& out) const {
    const std::size_t r = g_.num_factors();
    out.resize(g_.order());
    const std::int64_t* hd = &digits_[h * r];
    for (Code x = 0; x < g_.order(); ++x) {
      const std::int64_t* xd = &digits_[x * r];
      Code c = 0;
      for (std::size_t j = 0; j < r; ++j) {
        std::int64_t v = xd[j] + hd[j];
        if (v >= g_.orders()[j]) v -= g_.orders()[j];
        c += static_cast<Code>(v) * strides_[j];
      }
      out[x] = c;
    }
  }

 private:
  const FinAbGroup& g_;
  std::vector<std::int64_t> digits_;
  std::vector<Code> strides_;
};

void charge(const FinAbGroup& g, int order, std::uint64_t cap, const char* what) {
  if (order < 1) throw ValidationError(std::string(what) + ": order must be >= 1");
  const std::uint64_t cost = saturating_pow(g.order(), static_cast<std::uint64_t>(order) + 1);
  if (cost > cap) throw CapExceeded(what, cost, cap);
}

// S_j(g) = ∥g∥_{U^j}^{2^j}
double gowers_power(const std::vector<Complex>& g, int j, const Shifter& sh, std::vector<Code>& scratch) {
  if (j == 1) {
    Complex s = 0;
    for (const auto& v : g) s += v;
    s /= static_cast<double>(g.size());
    return std::norm(s);
  }
  double acc = 0;
  std::vector<Complex> d(g.size());
  for (Code h = 0; h < g.size(); ++h) {
    sh.shift(h, scratch);
    for (Code x = 0; x < g.size(); ++x) d[x] = g[scratch[x]] * std::conj(g[x]);
    std::vector<Code> inner;
    acc += gowers_power(d, j - 1, sh, inner);
  }
  return acc / static_cast<double>(g.size());
}

void gowers_exact(const std::vector<std::int64_t>& a, std::int64_t n, int j, const Shifter& sh, CyclotomicSum& out) {
  if (j == 1) {
    // |Σ_x e(a(x)/N)|^2 = Σ_c (Σ_s hist[s] hist[s-c]) e(c/N)
    std::vector<std::int64_t> hist(static_cast<std::size_t>(n), 0);
    for (auto v : a) ++hist[static_cast<std::size_t>(v)];
    for (std::int64_t s = 0; s < n; ++s) {
      if (hist[s] == 0) continue;
      for (std::int64_t t = 0; t < n; ++t) {
        if (hist[t] != 0) out.add(s - t, checked_mul(hist[s], hist[t]));
      }
    }
    return;
  }
  std::vector<Code> shift;
  std::vector<std::int64_t> d(a.size());
  for (Code h = 0; h < a.size(); ++h) {
    sh.shift(h, shift);
    for (Code x = 0; x < a.size(); ++x) d[x] = mod_floor(a[shift[x]] - a[x], n);
    gowers_exact(d, n, j - 1, sh, out);
  }
}

}  // namespace

// ------------------------------------------------------------ GroupFunction

GroupFunction GroupFunction::from_values(const FinAbGroup& g, std::vector<Complex> values) {
  if (values.size() != g.order()) throw ValidationError("function table does not cover the group");
  GroupFunction f;
  f.group_ = g;
  f.values_ = std::move(values);
  return f;
}

GroupFunction GroupFunction::from_phases(const FinAbGroup& g, std::int64_t modulus, std::vector<std::int64_t> numerators) {
  if (modulus < 1) throw ValidationError("phase denominator must be >= 1");
  if (numerators.size() != g.order()) throw ValidationError("phase table does not cover the group");
  GroupFunction f;
  f.group_ = g;
  f.modulus_ = modulus;
  f.values_.reserve(numerators.size());
  for (auto& a : numerators) {
    a = mod_floor(a, modulus);
    f.values_.push_back(unit_phase(a, modulus));
  }
  f.numerators_ = std::move(numerators);
  return f;
}

GroupFunction GroupFunction::constant(const FinAbGroup& g, Complex c) {
  return from_values(g, std::vector<Complex>(g.order(), c));
}

bool GroupFunction::is_one_bounded(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [&](const Complex& v) { return std::abs(v) <= 1.0 + tol; });
}

GroupFunction GroupFunction::operator*(const GroupFunction& o) const {
  if (group_ != o.group_) throw ValidationError("product of functions on different groups");
  if (is_exact() && o.is_exact()) {
    const std::int64_t n = lcm64(modulus_, o.modulus_);
    std::vector<std::int64_t> a(values_.size());
    for (std::size_t x = 0; x < a.size(); ++x) {
      a[x] = numerators_[x] * (n / modulus_) + o.numerators_[x] * (n / o.modulus_);
    }
    return from_phases(group_, n, std::move(a));
  }
  std::vector<Complex> v(values_.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = values_[x] * o.values_[x];
  return from_values(group_, std::move(v));
}

GroupFunction GroupFunction::conj() const {
  if (is_exact()) {
    std::vector<std::int64_t> a(numerators_.size());
    for (std::size_t x = 0; x < a.size(); ++x) a[x] = -numerators_[x];
    return from_phases(group_, modulus_, std::move(a));
  }
  std::vector<Complex> v(values_.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::conj(values_[x]);
  return from_values(group_, std::move(v));
}

GroupFunction GroupFunction::translate(const Element& a) const {
  group_.check(a);
  std::vector<Code> s;
  Shifter(group_).shift(group_.encode(a), s);
  if (is_exact()) {
    std::vector<std::int64_t> n(numerators_.size());
    for (Code x = 0; x < n.size(); ++x) n[x] = numerators_[s[x]];
    return from_phases(group_, modulus_, std::move(n));
  }
  std::vector<Complex> v(values_.size());
  for (Code x = 0; x < v.size(); ++x) v[x] = values_[s[x]];
  return from_values(group_, std::move(v));
}

// ------------------------------------------------------------------- norms

double gowers_norm(const GroupFunction& f, int order, std::uint64_t cap) {
  charge(f.group(), order, cap, "gowers_norm");
  Shifter sh(f.group());
  std::vector<Code> scratch;
  const double s = std::max(0.0, gowers_power(f.values(), order, sh, scratch));
  return std::pow(s, 1.0 / std::ldexp(1.0, order));
}

CyclotomicSum gowers_power_exact(const GroupFunction& f, int order, std::uint64_t cap) {
  if (!f.is_exact()) throw ValidationError("exact Gowers norm needs a phase-valued function");
  charge(f.group(), order, cap, "gowers_power_exact");
  CyclotomicSum out(f.modulus());
  gowers_exact(f.numerators(), f.modulus(), order, Shifter(f.group()), out);
  return out;
}

double gowers_norm_exact(const GroupFunction& f, int order, std::uint64_t cap) {
  const CyclotomicSum s = gowers_power_exact(f, order, cap);
  const long double total = powl(static_cast<long double>(f.group().order()), order + 1);
  const long double v = std::max<long double>(0, s.value().real() / total);
  return static_cast<double>(powl(v, 1.0L / std::ldexp(1.0L, order)));
}

Complex correlation(const GroupFunction& f, const GroupFunction& g) {
  if (f.group() != g.group()) throw ValidationError("correlation of functions on different groups");
  Complex s = 0;
  for (Code x = 0; x < f.values().size(); ++x) s += f[x] * std::conj(g[x]);
  return s / static_cast<double>(f.values().size());
}

// -------------------------------------------------------- phase polynomials

GroupFunction phase(const PolyMap& p) {
  if (p.codomain().num_factors() > 1) throw ValidationError("phase polynomial must take values in one cyclic group");
  if (!degree(p).polynomial) throw HypothesisError("phase: map is not a polynomial");
  const std::int64_t n = p.codomain().num_factors() == 0 ? 1 : p.codomain().orders()[0];
  std::vector<std::int64_t> a(p.domain().order(), 0);
  if (n > 1) {
    for (Code x = 0; x < a.size(); ++x) a[x] = p.coord(x, 0);
  }
  return GroupFunction::from_phases(p.domain(), n, std::move(a));
}

PolyMap random_phase_polynomial(const FinAbGroup& g, int k, std::mt19937_64& rng) {
  const std::int64_t n = g.torsion();
  std::vector<std::size_t> coords;
  for (std::size_t j = 0; j < g.num_factors(); ++j) {
    if (g.orders()[j] > 1) coords.push_back(j);
  }
  // Monomials x_{i1}...x_{it} (i1 <= ... <= it), weighted by N/gcd so they
  // are well defined on the residues.
  struct Term {
    std::vector<std::size_t> idx;
    std::int64_t coef;
  };
  std::vector<Term> terms;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start, int left) -> void {
    if (!cur.empty()) {
      std::int64_t gg = 0;
      for (std::size_t i : cur) gg = gcd64(gg, g.orders()[i]);
      const std::int64_t c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
      terms.push_back({cur, mod_floor(c * (n / gg), n)});
    }
    if (left == 0) return;
    for (std::size_t s = start; s < coords.size(); ++s) {
      cur.push_back(coords[s]);
      self(self, s, left - 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, k);
  const std::int64_t c0 = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
  return PolyMap::from_function(g, FinAbGroup({n}), [&](const Element& x) {
    std::int64_t v = c0;
    for (const auto& t : terms) {
      std::int64_t m = t.coef;
      for (std::size_t i : t.idx) m = mod_floor(m * x[i], n);
      v = mod_floor(v + m, n);
    }
    return Element{v};
  });
}

ProjectedPhase project_phase(const PolyMap& phi, const Homomorphism& tau) {
  if (phi.domain() != tau.domain()) throw ValidationError("project_phase: φ and τ have different domains");
  if (!tau.is_surjective()) throw HypothesisError("project_phase: τ is not surjective");
  ProjectedPhase pp;
  pp.base = phi;
  pp.tau = tau;
  pp.degree = degree(phi);
  const GroupFunction e = phase(phi);
  const FinAbGroup& a = tau.codomain();
  const FinAbGroup& b = tau.domain();
  pp.fiber_sums.assign(a.order(), CyclotomicSum(e.modulus()));
  for (Code y = 0; y < b.order(); ++y) pp.fiber_sums[tau.apply_code(y)].add(e.numerators()[y]);
  pp.fiber_size = b.order() / a.order();
  std::vector<Complex> v(a.order());
  for (Code x = 0; x < a.order(); ++x) {
    const auto s = pp.fiber_sums[x].value() / static_cast<long double>(pp.fiber_size);
    v[x] = Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
  }
  pp.table = GroupFunction::from_values(a, std::move(v));
  pp.torsion = a.torsion();
  pp.source_torsion = b.torsion();
  pp.rank_preserving = minimal_rank(a) == minimal_rank(b);
  return pp;
}

ObstructionReport obstruction_check(const GroupFunction& f, const ProjectedPhase& pp, int k, double tol,
                                    std::uint64_t cap) {
  if (!pp.degree.polynomial) throw HypothesisError("obstruction_check: φ has no degree certificate");
  if (pp.degree.value > k) throw HypothesisError("obstruction_check: φ has degree above k");
  if (!f.is_one_bounded()) throw ValidationError("obstruction_check: f is not 1-bounded");
  ObstructionReport r;
  r.k = k;
  r.correlation = std::abs(correlation(f, pp.table));
  r.norm = gowers_norm(f, k + 1, cap);
  r.holds = r.correlation <= r.norm + tol;
  return r;
}

AverageFamily projected_as_average(const ProjectedPhase& pp, const PolyMap& iota) {
  const FinAbGroup& a = pp.tau.codomain();
  const FinAbGroup& b = pp.tau.domain();
  if (iota.domain() != a || iota.codomain() != b) throw ValidationError("projected_as_average: ι has the wrong groups");
  for (Code x = 0; x < a.order(); ++x) {
    if (pp.tau.apply(iota.at(x)) != a.decode(x)) throw HypothesisError("projected_as_average: ι is not a cross-section");
  }
  if (!pp.degree.polynomial) throw HypothesisError("projected_as_average: φ has no degree certificate");

  AverageFamily fam;
  fam.cross_section_degree = degree(iota);
  if (!fam.cross_section_degree.polynomial) throw HypothesisError("projected_as_average: ι is not polynomial");
  fam.degree_bound = fam.cross_section_degree.value * pp.degree.value;
  fam.kernel = kernel(pp.tau).elements();

  const std::int64_t n = pp.fiber_sums.empty() ? 1 : pp.fiber_sums.front().modulus();
  std::vector<CyclotomicSum> sums(a.order(), CyclotomicSum(n));
  for (Code u : fam.kernel) {
    const Element ue = b.decode(u);
    PolyMap iu = PolyMap::from_function(a, b, [&](const Element& x) { return b.add(iota(x), ue); });
    PolyMap psi = compose(pp.base, iu);
    const Degree dg = degree(psi);
    if (!dg.polynomial || dg.value > fam.degree_bound) {
      throw InvariantViolation("projected_as_average: φ∘ι_u exceeds deg(ι)·deg(φ)");
    }
    GroupFunction e = phase(psi);
    for (Code x = 0; x < a.order(); ++x) sums[x].add(e.numerators()[x] * (n / e.modulus()));
    fam.phases.push_back(std::move(psi));
    fam.members.push_back(std::move(e));
    fam.degrees.push_back(dg);
  }
  for (Code x = 0; x < a.order(); ++x) {
    if (!sums[x].equals(pp.fiber_sums[x])) throw InvariantViolation("projected_as_average: average differs from φ_{*τ}");
  }
  return fam;
}

double box_norm_4cycle(const GroupFunction& f, std::size_t split) {
  const FinAbGroup& g = f.group();
  if (split == 0 || split >= g.num_factors()) throw ValidationError("box norm needs a split into two nonempty factor blocks");
  std::uint64_t nb = 1;
  for (std::size_t j = split; j < g.num_factors(); ++j) nb *= static_cast<std::uint64_t>(g.orders()[j]);
  const std::uint64_t na = g.order() / nb;
  double acc = 0;
  for (std::uint64_t a1 = 0; a1 < na; ++a1) {
    for (std::uint64_t a2 = 0; a2 < na; ++a2) {
      Complex s = 0;
      for (std::uint64_t b = 0; b < nb; ++b) s += f[a1 * nb + b] * std::conj(f[a2 * nb + b]);
      acc += std::norm(s / static_cast<double>(nb));
    }
  }
  return std::pow(std::max(0.0, acc / static_cast<double>(na * na)), 0.25);
}

// ----------------------------------------------------------------- cut norm

namespace {

struct CutLayout {
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> sizes;         // |∏_{i∈B} A_i|
  std::vector<std::vector<std::uint32_t>> index;  // index[s][x]
};

CutLayout cut_layout(const FinAbGroup& g, const std::vector<std::size_t>& block_sizes, int d) {
  std::size_t total = 0;
  for (auto s : block_sizes) total += s;
  if (total != g.num_factors() || block_sizes.empty()) throw ValidationError("cut norm blocks must partition the coordinates");
  const std::size_t n = block_sizes.size();
  if (d < 1 || static_cast<std::size_t>(d) > n - 1) throw ValidationError("cut norm needs 1 <= d <= n-1");

  std::vector<std::uint64_t> card(n, 1);
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < block_sizes[i]; ++t) card[i] *= static_cast<std::uint64_t>(g.orders()[c++]);
  }
  std::vector<std::uint64_t> after(n, 1);
  for (std::size_t i = n - 1; i-- > 0;) after[i] = after[i + 1] * card[i + 1];

  CutLayout lay;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == static_cast<std::size_t>(d)) {
      lay.subsets.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  for (const auto& s : lay.subsets) {
    std::size_t size = 1;
    for (auto i : s) size *= card[i];
    lay.sizes.push_back(size);
    std::vector<std::uint32_t> idx(g.order());
    for (Code x = 0; x < g.order(); ++x) {
      std::uint64_t k = 0;
      for (auto i : s) k = k * card[i] + (x / after[i]) % card[i];
      idx[x] = static_cast<std::uint32_t>(k);
    }
    lay.index.push_back(std::move(idx));
  }
  return lay;
}

double cut_value(const GroupFunction& f, const CutLayout& lay, const std::vector<std::vector<Complex>>& u) {
  Complex s = 0;
  for (Code x = 0; x < f.values().size(); ++x) {
    Complex t = f[x];
    for (std::size_t b = 0; b < u.size(); ++b) t *= std::conj(u[b][lay.index[b][x]]);
    s += t;
  }
  return std::abs(s) / static_cast<double>(f.values().size());
}

}  // namespace

CutNormResult cut_norm_lower(const GroupFunction& f, const std::vector<std::size_t>& block_sizes, int d,
                             const CutNormOptions& opts) {
  const CutLayout lay = cut_layout(f.group(), block_sizes, d);
  std::mt19937_64 rng(opts.seed);
  const double inv = 1.0 / static_cast<double>(f.values().size());

  CutNormResult best;
  best.value = -1;
  best.subsets = lay.subsets;
  for (int start = 0; start <= opts.restarts; ++start) {
    std::vector<std::vector<Complex>> u;
    for (auto size : lay.sizes) {
      std::vector<Complex> w(size, Complex(1, 0));
      if (start > 0) {
        for (auto& v : w) {
          const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          v = std::polar(1.0, 2.0 * std::numbers::pi * t);
        }
      }
      u.push_back(std::move(w));
    }
    std::vector<double> trace{cut_value(f, lay, u)};
    for (int it = 0; it < opts.iterations; ++it) {
      for (std::size_t b = 0; b < u.size(); ++b) {
        std::vector<Complex> w(lay.sizes[b], 0);
        for (Code x = 0; x < f.values().size(); ++x) {
          Complex t = f[x];
          for (std::size_t o = 0; o < u.size(); ++o) {
            if (o != b) t *= std::conj(u[o][lay.index[o][x]]);
          }
          w[lay.index[b][x]] += t * inv;
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
          const double m = std::abs(w[i]);
          u[b][i] = m > 0 ? w[i] / m : Complex(1, 0);
        }
      }
      trace.push_back(cut_value(f, lay, u));
      if (trace.back() - trace[trace.size() - 2] <= 1e-13) break;
    }
    if (trace.back() > best.value) {
      best.value = trace.back();
      best.witnesses = u;
      best.trace = trace;
    }
  }
  return best;
}

}  // namespace hofa
