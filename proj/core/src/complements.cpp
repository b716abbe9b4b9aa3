#include "hofa/complements.hpp"

#include <algorithm>
#include <limits>

namespace hofa {

namespace {

struct PrimePower {
  std::int64_t p = 1;
  int n = 0;
};

// The trivial group counts as a p-group for every p.
PrimePower require_p_group(const FinAbGroup& a, const char* op) {
  if (a.is_trivial()) return {};
  const auto p = a.prime();
  if (!p) throw HypothesisError(std::string(op) + ": " + a.to_string() + " is not a p-group");
  return {*p, a.torsion_exponent()};
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

bool is_zero_on(const Element& x) {
  return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
}

struct HullRun {
  std::vector<Element> blocks;
  std::vector<std::size_t> killed;
};

// x must be supported on `live`.
HullRun hull_on(const FinAbGroup& a, Element cur, std::vector<std::size_t> live, std::int64_t p) {
  HullRun run;
  while (!is_zero_on(cur)) {
    while (std::all_of(live.begin(), live.end(), [&](std::size_t j) { return cur[j] % p == 0; })) {
      for (std::size_t j : live) cur[j] /= p;
    }
    Element block = a.zero();
    std::vector<std::size_t> rest;
    std::size_t kill = a.num_factors();
    for (std::size_t j : live) {
      if (cur[j] % p != 0) {
        block[j] = cur[j];
        cur[j] = 0;
        if (kill == a.num_factors() || a.orders()[j] > a.orders()[kill]) kill = j;
      } else {
        rest.push_back(j);
      }
    }
    run.blocks.push_back(std::move(block));
    run.killed.push_back(kill);
    live = std::move(rest);
  }
  return run;
}

std::vector<std::size_t> all_coords(const FinAbGroup& a) {
  std::vector<std::size_t> v(a.num_factors());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = j;
  return v;
}

void require_complement(const ComplementedSubgroup& r, const char* op) {
  if (!is_complement(r.subgroup, r.complement)) {
    throw InvariantViolation(std::string(op) + ": returned pair is not complementary");
  }
}

}  // namespace

HullResult complemented_hull(const FinAbGroup& a, const Element& x) {
  a.check(x);
  const PrimePower pp = require_p_group(a, "complemented_hull");
  HullResult out;
  out.bound = saturating_pow(pp.p, static_cast<std::uint64_t>(pp.n) * pp.n);

  HullRun run = hull_on(a, x, all_coords(a), pp.p);
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < a.num_factors(); ++j) {
    if (std::find(run.killed.begin(), run.killed.end(), j) == run.killed.end()) keep.push_back(j);
  }
  out.blocks = run.blocks;
  out.subgroup = Subgroup::generated(a, std::move(run.blocks));
  out.complement = Subgroup::coordinate(a, keep);

  if (!out.subgroup.contains(x)) throw InvariantViolation("complemented_hull: x not in H");
  if (out.subgroup.order() > out.bound) throw InvariantViolation("complemented_hull: |H| exceeds p^{n^2}");
  require_complement(out, "complemented_hull");
  return out;
}

EnlargeResult complemented_enlarge(const FinAbGroup& a, const std::vector<Element>& gens) {
  const PrimePower pp = require_p_group(a, "complemented_enlarge");
  for (const auto& g : gens) a.check(g);
  EnlargeResult out;
  out.bound = saturating_pow(pp.p, static_cast<std::uint64_t>(pp.n) * pp.n * gens.size());

  std::vector<std::size_t> active = all_coords(a);
  std::vector<Element> acc;
  Subgroup current = Subgroup::trivial(a);
  for (const auto& h : gens) {
    // A = current ⊕ (coordinates in `active`), so h splits uniquely.
    std::optional<Element> rem;
    for (Code c : current.elements()) {
      Element d = a.sub(h, a.decode(c));
      bool supported = true;
      for (std::size_t j = 0; j < d.size() && supported; ++j) {
        if (d[j] != 0 && std::find(active.begin(), active.end(), j) == active.end()) supported = false;
      }
      if (supported) {
        rem = std::move(d);
        break;
      }
    }
    if (!rem) throw InvariantViolation("complemented_enlarge: generator does not split over the complement");

    HullRun run = hull_on(a, *rem, active, std::max<std::int64_t>(pp.p, 2));
    for (auto& b : run.blocks) acc.push_back(std::move(b));
    std::vector<std::size_t> next;
    for (std::size_t j : active) {
      if (std::find(run.killed.begin(), run.killed.end(), j) == run.killed.end()) next.push_back(j);
    }
    active = std::move(next);
    current = Subgroup::generated(a, acc);
  }
  out.subgroup = current;
  out.complement = Subgroup::coordinate(a, active);

  for (const auto& h : gens) {
    if (!out.subgroup.contains(h)) throw InvariantViolation("complemented_enlarge: H not contained in H'");
  }
  if (out.subgroup.order() > out.bound) throw InvariantViolation("complemented_enlarge: |H'| exceeds p^{n^2 r}");
  require_complement(out, "complemented_enlarge");
  return out;
}

EnlargeResult complemented_enlarge(const Subgroup& h) { return complemented_enlarge(h.parent(), h.generators()); }

ShrinkResult complemented_shrink(const Subgroup& h) {
  const FinAbGroup& a = h.parent();
  const PrimePower pp = require_p_group(a, "complemented_shrink");
  const std::uint64_t r = h.index();
  ShrinkResult out;
  out.bound = saturating_pow(r, static_cast<std::uint64_t>(pp.n) * pp.n + pp.n);
  if (r == 1) {
    out.subgroup = h;
    out.complement = Subgroup::trivial(a);
    out.index = 1;
    return out;
  }

  const Quotient q = quotient(h);
  const Subgroup t = Subgroup::generated(a, q.lifts);
  const Subgroup inter = intersect(h, t);

  // Run the enlargement inside H itself, through an abstract presentation.
  const Presentation hp = presentation(h);
  const FinAbGroup& hg = hp.group;
  std::vector<Code> back(a.order(), std::numeric_limits<Code>::max());
  for (Code c = 0; c < hg.order(); ++c) back[hp.embedding.apply_code(c)] = c;

  std::vector<Element> qgens;
  const Presentation qp = presentation(inter);
  for (std::size_t i = 0; i < qp.group.num_factors(); ++i) {
    const Code c = back[a.encode(qp.embedding.apply(qp.group.generator(i)))];
    if (c == std::numeric_limits<Code>::max()) throw InvariantViolation("complemented_shrink: H ∩ T escapes H");
    qgens.push_back(hg.decode(c));
  }
  const EnlargeResult inner = complemented_enlarge(hg, qgens);

  out.subgroup = image_of(hp.embedding, inner.complement);
  out.complement = sum(image_of(hp.embedding, inner.subgroup), t);
  out.index = h.order() / out.subgroup.order();

  if (!out.subgroup.is_subgroup_of(h)) throw InvariantViolation("complemented_shrink: H' not inside H");
  if (out.index > out.bound) throw InvariantViolation("complemented_shrink: index exceeds r^{n^2+n}");
  require_complement(out, "complemented_shrink");
  return out;
}

ShrinkResult mtorsion_complemented_shrink(const Subgroup& h) {
  const FinAbGroup& a = h.parent();
  const PrimaryDecomposition pd = primary_decompose(a);
  ShrinkResult out;
  out.subgroup = Subgroup::trivial(a);
  out.complement = Subgroup::trivial(a);
  out.bound = 1;
  for (std::int64_t p : pd.primes) {
    const Subgroup hp = image_of(pd.projection(p), h);
    const ShrinkResult part = complemented_shrink(hp);
    const Homomorphism inj = pd.injection(p);
    out.subgroup = sum(out.subgroup, image_of(inj, part.subgroup));
    out.complement = sum(out.complement, image_of(inj, part.complement));
    out.bound = mul_sat(out.bound, part.bound);
  }
  out.index = h.order() / out.subgroup.order();
  if (!out.subgroup.is_subgroup_of(h)) throw InvariantViolation("mtorsion_complemented_shrink: H' not inside H");
  require_complement(out, "mtorsion_complemented_shrink");
  return out;
}

}  // namespace hofa
