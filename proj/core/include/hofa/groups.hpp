#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hofa/errors.hpp"
#include "hofa/smith.hpp"

namespace hofa {

/// Residue vector (x_1, ..., x_r) with 0 <= x_j < m_j.
using Element = std::vector<std::int64_t>;

/// Row-major index of an element: coordinate 0 is the most significant digit.
using Code = std::uint64_t;

/// Finite abelian group presented as Z_{m_1} x ... x Z_{m_r}.
class FinAbGroup {
 public:
  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<std::int64_t> orders);

  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
  std::int64_t factor_order(std::size_t j) const { return orders_.at(j); }
  /// Number of cyclic factors in this presentation (not the minimal rank).
  std::size_t num_factors() const noexcept { return orders_.size(); }
  std::uint64_t order() const noexcept { return order_; }
  std::int64_t torsion() const noexcept { return torsion_; }
  bool is_trivial() const noexcept { return order_ == 1; }

  /// The prime p when the group is a nontrivial p-group.
  std::optional<std::int64_t> prime() const;
  /// Exponent n with torsion = p^n; only meaningful for p-groups.
  int torsion_exponent() const;

  Element zero() const { return Element(orders_.size(), 0); }
  Element generator(std::size_t j) const;
  bool contains(const Element& x) const;
  /// Throws ValidationError when x is not a reduced element of this group.
  void check(const Element& x) const;
  /// Reduce an arbitrary integer vector modulo the factor orders.
  Element reduce(const Element& v) const;

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element scale(std::int64_t k, const Element& a) const;
  std::int64_t element_order(const Element& a) const;

  Code encode(const Element& x) const;
  Element decode(Code c) const;
  Code add_codes(Code a, Code b) const { return encode(add(decode(a), decode(b))); }

  std::string to_string() const;

  friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) { return a.orders_ == b.orders_; }
  friend bool operator!=(const FinAbGroup& a, const FinAbGroup& b) { return !(a == b); }

  static FinAbGroup product(const FinAbGroup& a, const FinAbGroup& b);

 private:
  std::vector<std::int64_t> orders_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
  std::int64_t torsion_ = 1;
};

/// Homomorphism given by an integer matrix (codomain factors x domain factors).
class Homomorphism {
 public:
  Homomorphism() = default;
  /// Validates that m_j * column_j vanishes in the codomain for every j.
  Homomorphism(FinAbGroup domain, FinAbGroup codomain, IntMatrix matrix);

  static Homomorphism identity(const FinAbGroup& g);
  static Homomorphism zero(const FinAbGroup& domain, const FinAbGroup& codomain);
  /// Column j is the image of the j-th standard generator.
  static Homomorphism from_images(const FinAbGroup& domain, const FinAbGroup& codomain,
                                  const std::vector<Element>& images);

  const FinAbGroup& domain() const noexcept { return domain_; }
  const FinAbGroup& codomain() const noexcept { return codomain_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  Element apply(const Element& x) const;
  Code apply_code(Code x) const { return codomain_.encode(apply(domain_.decode(x))); }
  /// this ∘ inner
  Homomorphism compose(const Homomorphism& inner) const;

  bool is_surjective() const;
  bool is_injective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }
  /// Inverse of a bijective homomorphism; throws HypothesisError otherwise.
  Homomorphism inverse() const;

  /// Pointwise equality (matrices are stored reduced, so this is exact).
  friend bool operator==(const Homomorphism& a, const Homomorphism& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.matrix_ == b.matrix_;
  }

 private:
  FinAbGroup domain_;
  FinAbGroup codomain_;
  IntMatrix matrix_;
};

/// Subgroup with a materialized element set (desk scale).
class Subgroup {
 public:
  Subgroup() = default;
  static Subgroup generated(const FinAbGroup& parent, std::vector<Element> generators);
  static Subgroup trivial(const FinAbGroup& parent) { return generated(parent, {}); }
  static Subgroup whole(const FinAbGroup& parent);
  /// Subgroup generated by the standard generators with the given indices.
  static Subgroup coordinate(const FinAbGroup& parent, const std::vector<std::size_t>& coords);

  const FinAbGroup& parent() const noexcept { return parent_; }
  const std::vector<Element>& generators() const noexcept { return generators_; }
  /// Sorted codes of all elements.
  const std::vector<Code>& elements() const noexcept { return elements_; }
  std::uint64_t order() const noexcept { return elements_.size(); }
  std::uint64_t index() const noexcept { return parent_.order() / order(); }

  bool contains(const Element& x) const { return parent_.contains(x) && member_[parent_.encode(x)]; }
  bool contains_code(Code c) const { return member_[c]; }
  bool is_subgroup_of(const Subgroup& other) const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_ == b.parent_ && a.elements_ == b.elements_;
  }

 private:
  FinAbGroup parent_;
  std::vector<Element> generators_;
  std::vector<Code> elements_;
  std::vector<char> member_;
};

Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup sum(const Subgroup& a, const Subgroup& b);

Subgroup kernel(const Homomorphism& h);
Subgroup image(const Homomorphism& h);
/// h(S) for a subgroup S of h's domain.
Subgroup image_of(const Homomorphism& h, const Subgroup& s);

/// G/H presented as a product of cyclic groups (invariant factors > 1).
struct Quotient {
  FinAbGroup group;
  Homomorphism projection;    // parent -> group, surjective with kernel H
  std::vector<Element> lifts;  // lifts[i] maps to the i-th standard generator
};
Quotient quotient(const Subgroup& h);
/// Throws ValidationError when h is not a subgroup of g.
Quotient quotient(const FinAbGroup& g, const Subgroup& h);

/// An abstract presentation of a subgroup: embedding is injective with image H.
struct Presentation {
  FinAbGroup group;
  Homomorphism embedding;
};
Presentation presentation(const Subgroup& h);

/// Invariant factors d_1 | d_2 | ... (all > 1) of the group.
std::vector<std::int64_t> invariant_factors(const FinAbGroup& g);
/// Minimum cardinality of a generating set.
std::size_t minimal_rank(const FinAbGroup& g);

/// CRT split of every cyclic factor into its prime-power parts.
struct PrimaryDecomposition {
  FinAbGroup parent;
  std::vector<std::int64_t> primes;
  std::map<std::int64_t, FinAbGroup> components;
  FinAbGroup product;                          // components concatenated, primes ascending
  std::map<std::int64_t, std::size_t> offset;  // first coordinate of each component in product
  Homomorphism iso;                            // parent -> product
  Homomorphism inverse;                        // product -> parent

  Homomorphism projection(std::int64_t p) const;  // parent -> G_p
  Homomorphism injection(std::int64_t p) const;   // G_p -> parent
};
PrimaryDecomposition primary_decompose(const FinAbGroup& g);

/// Exhaustive check that K + H = A and K ∩ H = {0}.
bool is_complement(const Subgroup& h, const Subgroup& k);

/// A complement of H in its parent, if one exists.
///
/// Complements of H are exactly the images of homomorphic sections of
/// A -> A/H, so for each invariant-factor generator e_i (order d_i) of A/H
/// the search looks for a lift l in the coset of e_i with d_i * l = 0.  The
/// first such lift in code order is returned, which makes the answer
/// deterministic; complements are in general not unique.
std::optional<Subgroup> find_complement(const Subgroup& h, std::uint64_t cap = kDefaultCostCap);

}  // namespace hofa
