#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hofa/groups.hpp"

namespace hofa {

/// Map between finite abelian groups stored as a full value table.
///
/// Values are kept flat: entry (x, i) is coordinate i of P(decode(x)).
class PolyMap {
 public:
  PolyMap() = default;
  /// `values` holds |domain| * num_factors(codomain) reduced residues.
  PolyMap(FinAbGroup domain, FinAbGroup codomain, std::vector<std::int64_t> values);

  static PolyMap from_function(const FinAbGroup& domain, const FinAbGroup& codomain,
                               const std::function<Element(const Element&)>& f);
  static PolyMap from_homomorphism(const Homomorphism& h);
  static PolyMap constant(const FinAbGroup& domain, const FinAbGroup& codomain, const Element& c);
  /// Table given as one codomain element per domain element, in code order.
  static PolyMap from_table(const FinAbGroup& domain, const FinAbGroup& codomain, const std::vector<Element>& table);

  const FinAbGroup& domain() const noexcept { return domain_; }
  const FinAbGroup& codomain() const noexcept { return codomain_; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  Element at(Code x) const;
  Element operator()(const Element& x) const { return at(domain_.encode(x)); }
  std::int64_t coord(Code x, std::size_t i) const { return values_[x * codomain_.num_factors() + i]; }

  bool is_zero() const;
  bool is_constant() const;

  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.values_ == b.values_;
  }

 private:
  FinAbGroup domain_;
  FinAbGroup codomain_;
  std::vector<std::int64_t> values_;
};

/// outer ∘ inner
PolyMap compose(const PolyMap& outer, const PolyMap& inner);
/// Pointwise sum of two maps with the same domain and codomain.
PolyMap add(const PolyMap& a, const PolyMap& b);

/// ∂_h P(x) = P(x+h) - P(x)
PolyMap derivative(const PolyMap& p, const Element& h);

/// Result of degree certification.
struct Degree {
  bool polynomial = false;
  int value = 0;  // meaningful only when polynomial

  static Degree of(int d) { return {true, d}; }
  static Degree not_polynomial() { return {false, 0}; }
  friend bool operator==(const Degree& a, const Degree& b) {
    return a.polynomial == b.polynomial && (!a.polynomial || a.value == b.value);
  }
};

/// Smallest d such that every (d+1)-fold derivative along the standard
/// generators vanishes, or NotPolynomial when the derivative sets cycle.
Degree degree(const PolyMap& p, std::uint64_t cap = kDefaultCostCap);
/// Same, with derivatives taken along an arbitrary generating set.
Degree degree(const PolyMap& p, const std::vector<Element>& generators, std::uint64_t cap = kDefaultCostCap);

/// x |-> a_0 + sum_{i>=1} a_i C(x, i) on Z with values in A.
struct BinomialPoly {
  FinAbGroup codomain;
  Element constant;
  std::vector<Element> coefficients;  // a_1, ..., a_k

  Element eval(std::int64_t x) const;
  /// Smallest T >= 1 with f(x+T) = f(x) for all x in Z.
  std::uint64_t minimal_period(std::uint64_t cap = kDefaultCostCap) const;
};

/// ι: Z_{p^s} -> Z_{p^d}, n mod p^s |-> n mod p^d for n in [0, p^s).
PolyMap cyclic_lift(std::int64_t p, int s, int d);

using BigInt = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<BigInt>>;

/// C_N^q for the circulant forward-difference matrix C_N (row i: -1 at i, 1 at i+1).
BigMatrix forward_difference_matrix_power(std::size_t n, std::uint64_t q);
/// C_{p^s}^{p^s}; throws InvariantViolation if some entry is not divisible by p.
BigMatrix forward_difference_power(std::int64_t p, int s);

/// M = S ∘ (A, id) ∘ P ∘ T for a surjection M: B -> A of p-groups.
///
/// S: A' x Z_{p^n}^m -> A and T: B -> B are isomorphisms.  P: B -> B' x
/// Z_{p^n}^m keeps the m pivot coordinates of order p^n, reduces the other
/// order-p^n coordinates mod p^{n-1} and keeps the rest.  `inner` is the
/// surjection B' -> A' between groups of torsion at most p^{n-1}.
struct SurjectionDecomposition {
  Homomorphism s;
  Homomorphism inner;
  Homomorphism p;
  Homomorphism t;
  std::size_t m = 0;
  std::int64_t prime = 1;
  int n = 0;
  std::vector<std::size_t> pivots;         // B coordinates carried to Z_{p^n}^m
  std::vector<std::size_t> reduced_domain;  // B coordinates kept in B', in order

  /// (A, id): B' x Z_{p^n}^m -> A' x Z_{p^n}^m
  Homomorphism inner_with_identity() const;
};

SurjectionDecomposition decompose_surjection(const Homomorphism& m);

/// τ ∘ ι = id_A for a surjection τ: B -> A, built prime by prime.
PolyMap polynomial_cross_section(const Homomorphism& tau);

}  // namespace hofa
