#include <gtest/gtest.h>

#include "hofa/groups.hpp"
#include "support/test_support.hpp"

using namespace hofa;
using namespace hofa::testing;

TEST(FinAbGroup, OrdersAndTorsion) {
  const FinAbGroup g({6, 4});
  EXPECT_EQ(g.order(), 24u);
  EXPECT_EQ(g.torsion(), 12);
  EXPECT_FALSE(g.prime().has_value());
  EXPECT_EQ(FinAbGroup({3, 27}).prime(), 3);
  EXPECT_EQ(FinAbGroup({3, 27}).torsion_exponent(), 3);
  EXPECT_THROW(FinAbGroup({0}), ValidationError);
}

TEST(FinAbGroup, EncodeIsRowMajor) {
  const FinAbGroup g({3, 5});
  EXPECT_EQ(g.encode({1, 2}), 7u);
  EXPECT_EQ(g.decode(7), (Element{1, 2}));
  for (Code c = 0; c < g.order(); ++c) EXPECT_EQ(g.encode(g.decode(c)), c);
  EXPECT_THROW(g.check({3, 0}), ValidationError);
}

TEST(Homomorphism, WellDefinedness) {
  EXPECT_NO_THROW(Homomorphism(FinAbGroup({6}), FinAbGroup({3}), {{1}}));
  // 1 mod 4 -> 1 mod 3 is not a homomorphism.
  EXPECT_THROW(Homomorphism(FinAbGroup({4}), FinAbGroup({3}), {{1}}), ValidationError);
}

TEST(Homomorphism, ComposeMatchesPointwise) {
  std::mt19937_64 rng(3);
  const std::vector<std::int64_t> pool{2, 3, 4, 6, 9};
  for (int t = 0; t < 40; ++t) {
    const FinAbGroup a = random_group(rng, pool, 60), b = random_group(rng, pool, 60), c = random_group(rng, pool, 60);
    const Homomorphism f = random_hom(rng, a, b), g = random_hom(rng, b, c);
    const Homomorphism gf = g.compose(f);
    for (Code x = 0; x < a.order(); ++x) EXPECT_EQ(gf.apply_code(x), g.apply_code(f.apply_code(x)));
  }
}

TEST(Homomorphism, InverseOfAutomorphism) {
  const FinAbGroup g({9});
  const Homomorphism twice(g, g, {{2}});
  const Homomorphism inv = twice.inverse();
  for (Code x = 0; x < 9; ++x) EXPECT_EQ(inv.apply_code(twice.apply_code(x)), x);
  EXPECT_THROW(Homomorphism(g, g, {{3}}).inverse(), HypothesisError);
}

TEST(KernelImage, Examples) {
  const Homomorphism red(FinAbGroup({6}), FinAbGroup({3}), {{1}});
  EXPECT_EQ(as_set(kernel(red)), (std::set<Element>{{0}, {3}}));
  const Homomorphism dbl(FinAbGroup({4}), FinAbGroup({4}), {{2}});
  EXPECT_EQ(as_set(image(dbl)), (std::set<Element>{{0}, {2}}));
}

TEST(KernelImage, OrderIdentity) {
  std::mt19937_64 rng(5);
  const std::vector<std::int64_t> pool{2, 3, 4, 5, 6, 8, 9};
  for (int t = 0; t < 60; ++t) {
    const FinAbGroup a = random_group(rng, pool, 80), b = random_group(rng, pool, 80);
    const Homomorphism h = random_hom(rng, a, b);
    std::set<Element> ker, img;
    for (Code x = 0; x < a.order(); ++x) {
      const Element y = h.apply(a.decode(x));
      img.insert(y);
      if (y == b.zero()) ker.insert(a.decode(x));
    }
    EXPECT_EQ(as_set(kernel(h)), ker);
    EXPECT_EQ(as_set(image(h)), img);
    EXPECT_EQ(ker.size() * img.size(), a.order());
  }
}

TEST(Subgroup, ClosureMatchesOracle) {
  std::mt19937_64 rng(7);
  const std::vector<std::int64_t> pool{2, 3, 4, 6, 9, 27};
  for (int t = 0; t < 50; ++t) {
    const FinAbGroup a = random_group(rng, pool, 300);
    std::vector<Element> gens;
    for (int i = 0, n = static_cast<int>(draw(rng, 0, 3)); i < n; ++i) gens.push_back(random_element(rng, a));
    const Subgroup s = Subgroup::generated(a, gens);
    EXPECT_EQ(as_set(s), closure(a, gens));
    EXPECT_EQ(s.index() * s.order(), a.order());
  }
}

TEST(Quotient, Z3xZ27ByFirstFactor) {
  const FinAbGroup a({3, 27});
  const Subgroup h = Subgroup::coordinate(a, {0});
  const Quotient q = quotient(h);
  EXPECT_EQ(q.group.order(), 27u);
  EXPECT_EQ(invariant_factors(q.group), (std::vector<std::int64_t>{27}));
}

TEST(Quotient, ProjectionKillsHAndIsSurjective) {
  std::mt19937_64 rng(11);
  const std::vector<std::int64_t> pool{2, 3, 4, 6, 8, 9};
  for (int t = 0; t < 50; ++t) {
    const FinAbGroup a = random_group(rng, pool, 200);
    const Subgroup h = Subgroup::generated(a, {random_element(rng, a), random_element(rng, a)});
    const Quotient q = quotient(h);
    EXPECT_EQ(q.group.order() * h.order(), a.order());
    EXPECT_TRUE(q.projection.is_surjective());
    EXPECT_EQ(as_set(kernel(q.projection)), as_set(h));
    for (std::size_t i = 0; i < q.lifts.size(); ++i) EXPECT_EQ(q.projection.apply(q.lifts[i]), q.group.generator(i));
  }
}

TEST(Quotient, RejectsForeignSubgroup) {
  const Subgroup h = Subgroup::whole(FinAbGroup({4}));
  EXPECT_THROW(quotient(FinAbGroup({6}), h), ValidationError);
}

TEST(Presentation, EmbeddingHasImageH) {
  const FinAbGroup a({3, 27});
  const Subgroup h = Subgroup::generated(a, {{1, 3}, {0, 9}});
  const Presentation p = presentation(h);
  EXPECT_EQ(p.group.order(), h.order());
  EXPECT_TRUE(p.embedding.is_injective());
  EXPECT_EQ(image(p.embedding), h);
}

TEST(PrimaryDecompose, Examples) {
  const auto d12 = primary_decompose(FinAbGroup({12}));
  EXPECT_EQ(d12.primes, (std::vector<std::int64_t>{2, 3}));
  EXPECT_EQ(d12.components.at(2), FinAbGroup({4}));
  EXPECT_EQ(d12.components.at(3), FinAbGroup({3}));
  const auto d7 = primary_decompose(FinAbGroup({7}));
  EXPECT_EQ(d7.components.at(7), FinAbGroup({7}));

  const FinAbGroup g({6, 4});
  const auto d = primary_decompose(g);
  EXPECT_EQ(d.components.at(2).order(), 8u);
  EXPECT_EQ(invariant_factors(d.components.at(2)), (std::vector<std::int64_t>{2, 4}));
  EXPECT_EQ(d.components.at(3), FinAbGroup({3}));
  std::set<Code> images;
  for (Code x = 0; x < g.order(); ++x) {
    images.insert(d.iso.apply_code(x));
    EXPECT_EQ(d.inverse.apply_code(d.iso.apply_code(x)), x);
  }
  EXPECT_EQ(images.size(), 24u);
}

TEST(PrimaryDecompose, RandomGroupsRoundTrip) {
  std::mt19937_64 rng(13);
  const std::vector<std::int64_t> pool{2, 3, 4, 5, 6, 10, 12, 15};
  for (int t = 0; t < 40; ++t) {
    const FinAbGroup g = random_group(rng, pool, 400);
    const auto d = primary_decompose(g);
    std::uint64_t prod = 1;
    for (const auto& [p, c] : d.components) {
      prod *= c.order();
      EXPECT_TRUE(c.is_trivial() || c.prime() == p);
      const Homomorphism round = d.projection(p).compose(d.injection(p));
      for (Code x = 0; x < c.order(); ++x) EXPECT_EQ(round.apply_code(x), x);
    }
    EXPECT_EQ(prod, g.order());
    for (Code x = 0; x < d.product.order(); ++x) EXPECT_EQ(d.iso.apply_code(d.inverse.apply_code(x)), x);
  }
}

TEST(FindComplement, OneThreeInZ3xZ27HasNone) {
  const FinAbGroup a({3, 27});
  const Subgroup h = Subgroup::generated(a, {{1, 3}});
  EXPECT_FALSE(find_complement(h).has_value());
  EXPECT_FALSE(complement_exists_by_search(a, as_set(h), 2));
}

TEST(FindComplement, WholeAndCoordinate) {
  const FinAbGroup a({2, 4});
  const auto k_whole = find_complement(Subgroup::whole(a));
  ASSERT_TRUE(k_whole.has_value());
  EXPECT_EQ(k_whole->order(), 1u);
  const auto k = find_complement(Subgroup::coordinate(a, {0}));
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(as_set(*k), closure(a, {{0, 1}}));
}

TEST(FindComplement, AgreesWithTupleSearch) {
  std::mt19937_64 rng(17);
  const std::vector<std::int64_t> pool{2, 3, 4, 8, 9};
  int found = 0, absent = 0;
  for (int t = 0; t < 60; ++t) {
    const FinAbGroup a = random_group(rng, pool, 40, 2);
    const Subgroup h = Subgroup::generated(a, {random_element(rng, a)});
    const auto k = find_complement(h);
    const bool oracle = complement_exists_by_search(a, as_set(h), a.num_factors());
    EXPECT_EQ(k.has_value(), oracle) << a.to_string();
    if (k) {
      ++found;
      EXPECT_TRUE(is_complement(h, *k));
      EXPECT_TRUE(unique_decomposition(a, as_set(h), as_set(*k)));
      EXPECT_EQ(h.order() * k->order(), a.order());
    } else {
      ++absent;
    }
  }
  EXPECT_GT(found, 0);
  EXPECT_GT(absent, 0);
}

TEST(FindComplement, CapIsEnforced) {
  const FinAbGroup a({3, 27});
  EXPECT_THROW(find_complement(Subgroup::generated(a, {{1, 3}}), 1), CapExceeded);
}

TEST(Smith, TransformsDiagonalize) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = static_cast<std::size_t>(draw(rng, 1, 4)), c = static_cast<std::size_t>(draw(rng, 1, 4));
    IntMatrix m(r, std::vector<std::int64_t>(c));
    for (auto& row : m)
      for (auto& v : row) v = draw(rng, -20, 20);
    const SmithForm s = smith_normal_form(m, r, c);
    EXPECT_EQ(multiply(multiply(s.left, m), s.right), s.diagonal);
    EXPECT_EQ(multiply(s.left, s.left_inv), identity_matrix(r));
    EXPECT_EQ(multiply(s.right, s.right_inv), identity_matrix(c));
    for (std::size_t i = 0; i + 1 < s.invariants.size(); ++i) {
      if (s.invariants[i] != 0) EXPECT_EQ(s.invariants[i + 1] % s.invariants[i], 0);
    }
  }
}

TEST(InvariantFactors, MatchElementaryDivisors) {
  EXPECT_EQ(invariant_factors(FinAbGroup({6, 4})), (std::vector<std::int64_t>{2, 12}));
  EXPECT_EQ(invariant_factors(FinAbGroup({2, 3, 5})), (std::vector<std::int64_t>{30}));
  EXPECT_EQ(minimal_rank(FinAbGroup({3, 27, 1})), 2u);
}
