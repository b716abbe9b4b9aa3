// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "support/test_support.hpp"

using namespace hofa;
using namespace hofa::testing;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  const char* id;
  const char* title;
  double limit_s;
  std::function<Outcome()> body;
};

std::string str(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Bilinear counterexample.
Outcome ac1() {
  Outcome out;
  for (int l = 1; l <= 3; ++l) {
    const GroupFunction f = bilinear(l);
    const double u3 = gowers_norm(f, 3);
    const double box = box_norm_4cycle(f, static_cast<std::size_t>(l));
    out.require(std::abs(u3 - 1) <= kTol, "l=" + std::to_string(l) + " U3=" + str(u3));
    out.require(std::abs(box - std::pow(2.0, -l / 4.0)) <= kTol, "l=" + std::to_string(l) + " box=" + str(box));
    out.detail = out.ok ? "l=1..3: U3=1, box=2^{-l/4}" : out.detail;
  }
  return out;
}

// Complement suite.
Outcome ac2() {
  Outcome out;
  const FinAbGroup a({3, 27});
  const Subgroup h = Subgroup::generated(a, {{1, 3}});
  out.require(!find_complement(h).has_value(), "<(1,3)> has a complement");
  out.require(!complement_exists_by_search(a, as_set(h), 2), "tuple search found a complement of <(1,3)>");

  const HullResult hull = complemented_hull(a, {1, 3});
  out.require(hull.subgroup.contains({1, 3}), "hull misses (1,3)");
  out.require(hull.subgroup.order() <= 19683, "hull larger than 3^9");
  out.require(unique_decomposition(a, as_set(hull.subgroup), as_set(hull.complement)), "hull not complemented");
  const std::uint64_t hull_order = hull.subgroup.order();

  std::mt19937_64 rng(2024);
  int instances = 0;
  std::uint64_t worst = 0;
  while (instances < 100) {
    const std::int64_t p = instances % 2 ? 2 : 3;
    const FinAbGroup g = random_p_group(rng, p, 6, 3);
    if (g.order() > 729) continue;
    std::vector<Element> gens;
    for (int i = 0, n = static_cast<int>(draw(rng, 1, 3)); i < n; ++i) gens.push_back(random_element(rng, g));
    const Subgroup hh = Subgroup::generated(g, gens);
    const ShrinkResult s = complemented_shrink(hh);
    ++instances;
    const std::string tag = " on " + g.to_string();
    out.require(s.subgroup.is_subgroup_of(hh), "shrink left H" + tag);
    out.require(s.index * s.subgroup.order() == hh.order(), "index mismatch" + tag);
    out.require(s.index <= s.bound, "index above r^{n^2+n}" + tag);
    out.require(unique_decomposition(g, as_set(s.subgroup), as_set(s.complement)), "not complemented" + tag);
    worst = std::max(worst, s.index);
  }
  if (out.ok) {
    out.detail = "no complement; hull order " + std::to_string(hull_order) + "; 100 shrinks, max index " +
                 std::to_string(worst);
  }
  return out;
}

// Cross-section suite.
Outcome ac3() {
  Outcome out;
  out.require(degree(cyclic_lift(3, 1, 2)) == Degree::of(3), "cyclic_lift(3,1,2) degree");
  out.require(!degree(PolyMap(FinAbGroup({3}), FinAbGroup({6}), {0, 1, 5})).polynomial, "(0,1,5) certified polynomial");

  std::mt19937_64 rng(3030);
  const std::vector<std::int64_t> pool{2, 3, 4, 6, 9, 27};
  int done = 0, worst_degree = 0;
  while (done < 50) {
    const FinAbGroup b = random_group(rng, pool, 243), a = random_group(rng, pool, 81, 2);
    if (b.torsion() > 27 || a.torsion() > 27) continue;
    const Homomorphism tau = random_hom(rng, b, a);
    if (!tau.is_surjective()) continue;
    ++done;
    const PolyMap iota = polynomial_cross_section(tau);
    for (Code x = 0; x < a.order(); ++x) {
      out.require(tau.apply(iota.at(x)) == a.decode(x), "tau(iota(x)) != x on " + b.to_string() + " -> " + a.to_string());
    }
    const Degree d = degree(iota);
    out.require(d.polynomial, "cross-section not polynomial");
    worst_degree = std::max(worst_degree, d.value);
  }

  for (std::int64_t p : {2, 3, 5}) {
    for (int s = 1; s <= 2; ++s) {
      const BigMatrix m = forward_difference_power(p, s);
      for (const auto& row : m)
        for (const auto& v : row) out.require(v % p == 0, "forward difference entry not divisible");
    }
  }
  if (out.ok) out.detail = "degree 3; NotPolynomial; 50 sections (max degree " + std::to_string(worst_degree) + ")";
  return out;
}

// Projected phase suite.
Outcome ac4() {
  Outcome out;
  const FinAbGroup z4({4}), z2({2});
  const ProjectedPhase zero = project_phase(PolyMap::from_homomorphism(Homomorphism::identity(z4)), Homomorphism(z4, z2, {{1}}));
  for (Code x = 0; x < 2; ++x) {
    out.require(zero.vanishes_at(x), "Z4 -> Z2 projection nonzero");
    out.require(std::abs(zero.table[x]) <= 1e-15, "Z4 -> Z2 table nonzero");
  }

  std::mt19937_64 rng(4040);
  const std::vector<std::int64_t> pool{2, 3, 4, 6, 8, 9};
  int averages = 0;
  while (averages < 50) {
    const FinAbGroup b = random_group(rng, pool, 144), a = random_group(rng, pool, 36, 2);
    const Homomorphism tau = random_hom(rng, b, a);
    if (!tau.is_surjective()) continue;
    ++averages;
    const int k = static_cast<int>(draw(rng, 1, 3));
    const PolyMap phi = random_phase_polynomial(b, k, rng);
    const ProjectedPhase pp = project_phase(phi, tau);
    const PolyMap iota = polynomial_cross_section(tau);
    const AverageFamily fam = projected_as_average(pp, iota);
    // Σ_u e(φ(ι(x)+u)) and Σ_{τ(y)=x} e(φ(y)) agree as multisets of phases.
    for (Code x = 0; x < a.order(); ++x) {
      std::map<std::int64_t, int> lhs, rhs;
      for (const auto& m : fam.phases) ++lhs[m.coord(x, 0)];
      for (Code y = 0; y < b.order(); ++y) {
        if (tau.apply_code(y) == x) ++rhs[phi.coord(y, 0)];
      }
      out.require(lhs == rhs, "average differs from projection");
    }
    const Degree di = degree(iota), dp = degree(phi);
    for (const auto& m : fam.phases) {
      const Degree dm = degree(m);
      out.require(dm.polynomial && dm.value <= di.value * dp.value, "member degree above deg(iota) deg(phi)");
    }
  }

  int pairs = 0;
  std::uint64_t largest = 0;
  double slack = 1e300;
  while (pairs < 200) {
    const FinAbGroup a = random_group(rng, pool, 64, 3);
    const FinAbGroup b = random_group(rng, pool, 128);
    const Homomorphism tau = random_hom(rng, b, a);
    if (!tau.is_surjective()) continue;
    const int k = static_cast<int>(draw(rng, 1, 3));
    ++pairs;
    largest = std::max(largest, a.order());
    const ProjectedPhase pp = project_phase(random_phase_polynomial(b, k, rng), tau);
    const GroupFunction f = pairs % 3 == 0 ? pp.table : random_bounded(rng, a);
    const ObstructionReport r = obstruction_check(f, pp, k);
    const double corr = std::abs(correlation(f, pp.table));
    out.require(corr <= gowers_norm(f, k + 1) + kTol, "obstruction inequality fails on " + a.to_string());
    out.require(r.holds, "obstruction_check reports failure");
    slack = std::min(slack, r.norm - corr);
  }
  if (out.ok) out.detail = "Z4->Z2 vanishes; 50 averages; 200 pairs up to |A|=" + std::to_string(largest) + ", min slack " + str(slack);
  return out;
}

// Cocycle split suite.
Outcome ac5() {
  Outcome out;
  const FilteredGroupNilspace y1({{2, 1}}), y2({{3, 1}});
  const FilteredGroupNilspace y = FilteredGroupNilspace::product(y1, y2);
  const FinAbGroup z({3});
  std::mt19937_64 rng(5050);
  for (int t = 0; t < 50; ++t) {
    const int k = 1 + t % 2, n = k + 1;
    const auto g0 = random_point_function(rng, y.size(), z);
    const Cocycle k2 = coboundary(y2, random_point_function(rng, y2.size(), z), z, n);
    const Cocycle rho = add(coboundary(y, g0, z, n), pullback(k2, y1));
    const SplitResult s = split_cocycle(rho, y1, y2);

    const Cocycle sg = coboundary(y, s.g, z, n);
    bool residual = s.residual_zero;
    for (std::size_t i = 0; i < rho.table.size(); ++i) {
      residual = residual && z.sub(z.sub(rho.table[i], s.kappa.table[i]), sg.table[i]) == z.zero();
    }
    out.require(residual, "nonzero residual at k=" + std::to_string(k));

    const std::uint64_t s1 = CubeSet(y1, n).size(), s2 = CubeSet(y2, n).size();
    bool factors = s.kappa_factors;
    for (std::uint64_t i1 = 0; i1 < s1; ++i1)
      for (std::uint64_t i2 = 0; i2 < s2; ++i2) factors = factors && s.kappa.table[i1 * s2 + i2] == s.kappa.table[i2];
    out.require(factors, "kappa does not factor through the second projection");

    const Cocycle e = average_E(rho, y1, y2), ep = rooted_average_Eprime(rho, y1, y2);
    const CubeSet cs(y, n);
    for (std::uint64_t i = 0; i < cs.size(); ++i) {
      out.require(z.sub(ep.table[i], e.table[i]) == s.g[cs.cube(i)[0]], "E' - E depends on more than the root");
    }
  }

  const FilteredGroupNilspace y3({{3, 1}});
  const FilteredGroupNilspace bad = FilteredGroupNilspace::product(y3, y2);
  const Cocycle zero{bad, 2, z, std::vector<Element>(CubeSet(bad, 2).size(), z.zero())};
  bool raised = false;
  try {
    split_cocycle(zero, y3, y2);
  } catch (const HypothesisError&) {
    raised = true;
  }
  out.require(raised, "non-coprime split did not raise");
  if (out.ok) out.detail = "50 cocycles split; non-coprime rejected";
  return out;
}

// Morphism constancy.
Outcome ac6() {
  Outcome out;
  const FilteredGroupNilspace x({{2, 1}});
  for (const auto& y : {FilteredGroupNilspace({{3, 1}}), FilteredGroupNilspace({{3, 2}})}) {
    const auto maps = enumerate_morphisms(x, y);
    out.require(maps.size() == 3, "expected 3 morphisms, got " + std::to_string(maps.size()));
    std::set<Code> values;
    for (const auto& f : maps) {
      out.require(f[0] == f[1], "nonconstant morphism");
      values.insert(f[0]);
    }
    out.require(values.size() == 3, "constants repeated");
  }
  if (out.ok) out.detail = "3 and 3 constants";
  return out;
}

// Norm properties.
Outcome ac7() {
  Outcome out;
  std::mt19937_64 rng(7070);
  const std::vector<std::int64_t> pool{2, 3, 4, 5, 6, 8};
  for (int t = 0; t < 100; ++t) {
    const FinAbGroup g = random_group(rng, pool, 64);
    const GroupFunction f = random_bounded(rng, g);
    double prev = gowers_norm(f, 1);
    for (int k = 2; k <= 4; ++k) {
      const double cur = gowers_norm(f, k);
      out.require(prev <= cur + kTol, "U^" + std::to_string(k - 1) + " > U^" + std::to_string(k) + " on " + g.to_string());
      prev = cur;
    }
  }
  for (int t = 0; t < 100; ++t) {
    const FinAbGroup g = random_group(rng, pool, 64);
    const GroupFunction f = random_bounded(rng, g);
    double s = 0;
    for (const auto& c : dft(f)) s += std::pow(std::abs(c), 4);
    out.require(std::abs(std::pow(gowers_norm(f, 2), 4) - s) <= kTol, "U^2 Fourier identity on " + g.to_string());
  }
  for (int t = 0; t < 100; ++t) {
    const FinAbGroup g = random_group(rng, pool, 64);
    const int k = static_cast<int>(draw(rng, 1, 2));
    const GroupFunction f = random_bounded(rng, g);
    const GroupFunction mod = f * phase(random_phase_polynomial(g, k, rng));
    const double a = gowers_norm(f, k + 1), b = gowers_norm(mod, k + 1);
    out.require(std::abs(a - b) <= kTol, "modulation changed U^" + std::to_string(k + 1) + " on " + g.to_string());
  }
  for (int t = 0; t < 100; ++t) {
    const FinAbGroup g = random_group(rng, pool, 64);
    const GroupFunction f = random_bounded(rng, g);
    const GroupFunction ft = f.translate(random_element(rng, g));
    for (int k = 1; k <= 3; ++k) out.require(std::abs(gowers_norm(ft, k) - gowers_norm(f, k)) <= kTol, "translation");
  }
  if (out.ok) out.detail = "4 properties x 100 instances";
  return out;
}

// Periodicity.
Outcome ac8() {
  Outcome out;
  std::mt19937_64 rng(8080);
  int count = 0;
  for (std::int64_t m : {2, 3, 4, 6}) {
    for (int k = 0; k <= 3; ++k) {
      for (int t = 0; t < 10; ++t) {
        const FinAbGroup z = t % 2 ? FinAbGroup({m}) : FinAbGroup({m, m});
        BinomialPoly b{z, random_element(rng, z), {}};
        for (int i = 0; i < k; ++i) b.coefficients.push_back(random_element(rng, z));
        std::uint64_t bound = 1;
        for (int i = 0; i <= k; ++i) bound *= static_cast<std::uint64_t>(m);
        const std::uint64_t period = b.minimal_period();
        out.require(bound % period == 0, "period " + std::to_string(period) + " does not divide " + std::to_string(bound));
        for (std::int64_t x = 0; x < static_cast<std::int64_t>(bound); ++x) {
          out.require(b.eval(x + static_cast<std::int64_t>(period)) == b.eval(x), "not a period");
        }
        ++count;
      }
    }
  }
  if (out.ok) out.detail = std::to_string(count) + " instances";
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "bilinear counterexample", 30, ac1},   {"AC2", "complement suite", 60, ac2},
      {"AC3", "cross-section suite", 60, ac3},       {"AC4", "projected phase suite", 120, ac4},
      {"AC5", "cocycle split suite", 120, ac5},      {"AC6", "morphism constancy", 10, ac6},
      {"AC7", "norm property suite", 120, ac7},      {"AC8", "periodicity", 10, ac8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s %s %s: %s [%.2fs / %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, o.detail.c_str(), secs,
                c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
