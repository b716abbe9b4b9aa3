#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hofa/groups.hpp"

namespace hofa {

/// ∏ D_{d_j}(Z_{m_j}): a product of cyclic groups, each with its own degree.
class FilteredGroupNilspace {
 public:
  FilteredGroupNilspace() = default;
  /// Pairs (order m_j, degree d_j >= 1).
  explicit FilteredGroupNilspace(std::vector<std::pair<std::int64_t, int>> factors);
  /// D_d(A) for a group A.
  static FilteredGroupNilspace uniform(const FinAbGroup& a, int d);
  /// Y_1 x Y_2; point codes satisfy code = code_1 * |Y_2| + code_2.
  static FilteredGroupNilspace product(const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2);

  const std::vector<std::pair<std::int64_t, int>>& factors() const noexcept { return factors_; }
  const FinAbGroup& group() const noexcept { return group_; }
  std::uint64_t size() const noexcept { return group_.order(); }
  int step() const noexcept { return step_; }

  friend bool operator==(const FilteredGroupNilspace& a, const FilteredGroupNilspace& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<std::pair<std::int64_t, int>> factors_;
  FinAbGroup group_;
  int step_ = 0;
};

/// A cube {0,1}^n -> X as point codes; entry ω is the image of the vertex
/// whose bit i is coordinate i.
using Cube = std::vector<Code>;

/// C^n(X), enumerated through the parametrization q(v)_j = Σ_{|S|<=d_j} a_{S,j} ∏_{i∈S} v_i.
///
/// Dense indices are row-major over factors, so for a product Y_1 x Y_2 the
/// index of q_1 x q_2 is index_1 * |C^n(Y_2)| + index_2.
class CubeSet {
 public:
  /// Enumeration (cube, rooted) throws CapExceeded past `cap` cubes; membership never does.
  CubeSet(FilteredGroupNilspace x, int n, std::uint64_t cap = kDefaultCostCap);

  const FilteredGroupNilspace& space() const noexcept { return x_; }
  int dimension() const noexcept { return n_; }
  std::size_t vertices() const noexcept { return std::size_t{1} << n_; }
  std::uint64_t size() const noexcept { return size_; }

  Cube cube(std::uint64_t index) const;
  /// Dense index of a cube; nullopt when q is not a cube.
  std::optional<std::uint64_t> index_of(const Cube& q) const;
  /// Host–Kra test: every (d_j+1)-face alternating sum vanishes in factor j.
  bool contains(const Cube& q) const;
  /// Dense indices of the cubes with q(0) = y.
  std::vector<std::uint64_t> rooted(Code y) const;
  /// Row-major code over the vertex assignments, vertex 0 most significant (for serialization).
  std::string vertex_code(const Cube& q) const;

 private:
  FilteredGroupNilspace x_;
  int n_;
  std::vector<std::vector<std::uint32_t>> monomials_;  // per factor: vertex-subset masks with |S| <= d_j
  std::vector<std::uint64_t> factor_counts_;
  std::uint64_t size_ = 1;
  std::uint64_t cap_;

  void require_enumerable() const;
};

/// Function C^n(X) -> Z, tabulated by dense cube index.
struct Cocycle {
  FilteredGroupNilspace space;
  int dimension = 0;
  FinAbGroup codomain;
  std::vector<Element> table;
};

/// Σ_v (-1)^{|v|} g(q(v)) for g given per point code.
Cocycle coboundary(const FilteredGroupNilspace& x, const std::vector<Element>& g, const FinAbGroup& z, int n);

/// ρ(q_1 x q_2) := κ(q_2) on C^n(Y_1 x Y_2).
Cocycle pullback(const Cocycle& kappa, const FilteredGroupNilspace& y1);

Cocycle add(const Cocycle& a, const Cocycle& b);

struct CocycleCheck {
  bool additive = false;               // ρ(q'') = ρ(q) + ρ(q') for concatenations along every direction
  bool permutation_invariant = false;  // ρ(q∘σ) = ρ(q) for coordinate permutations σ
  std::optional<int> reflection_sign;  // s with ρ(q∘r) = s ρ(q) for every reflection r, if one exists
  bool ok() const noexcept { return additive && permutation_invariant; }
};

CocycleCheck check_cocycle(const Cocycle& rho);
inline bool is_cocycle(const Cocycle& rho) { return check_cocycle(rho).ok(); }

/// The unique z with N z = sum; requires gcd(N, |Z|) = 1.
Element avg_coprime(const FinAbGroup& z, const Element& sum, std::uint64_t n);
Element avg_coprime(const FinAbGroup& z, const std::vector<Element>& values);

/// E(ρ)(q_1 x q_2) = E_{q_1' ∈ C^n(Y_1)} ρ(q_1' x q_2), for ρ on Y_1 x Y_2.
Cocycle average_E(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2);
/// E'(ρ)(q) = E_{q_1' ∈ C^n_{q_1(0)}(Y_1)} ρ(q_1' x q_2); not a cocycle in general.
Cocycle rooted_average_Eprime(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2);

struct SplitResult {
  Cocycle kappa;
  std::vector<Element> g;         // per point of Y_1 x Y_2
  std::vector<Element> residual;  // ρ - κ - σ(g∘q), per cube
  bool residual_zero = false;
  bool kappa_factors = false;     // κ(q_1 x q_2) independent of q_1
};

/// ρ = E(ρ) + σ(g∘q) with g(y) = E'(ρ)(q) - E(ρ)(q) for any q rooted at y.
SplitResult split_cocycle(const Cocycle& rho, const FilteredGroupNilspace& y1, const FilteredGroupNilspace& y2);

/// f (per point code of X, values point codes of Y) maps every cube of
/// dimension <= max_dim to a cube; max_dim defaults to step(Y) + 1.
bool is_morphism(const std::vector<Code>& f, const FilteredGroupNilspace& x, const FilteredGroupNilspace& y,
                 std::optional<int> max_dim = std::nullopt);

std::vector<std::vector<Code>> enumerate_morphisms(const FilteredGroupNilspace& x, const FilteredGroupNilspace& y,
                                                   std::optional<int> max_dim = std::nullopt,
                                                   std::uint64_t cap = kDefaultCostCap);

}  // namespace hofa
