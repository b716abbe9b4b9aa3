#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "hofa/cyclotomic.hpp"
#include "hofa/groups.hpp"
#include "hofa/polymaps.hpp"

namespace hofa {

using Complex = std::complex<double>;

/// Complex-valued function on a finite abelian group, indexed by element code.
///
/// A function built from phases keeps the exact numerators a(x) of
/// e(a(x)/N) alongside the floating values.
class GroupFunction {
 public:
  GroupFunction() = default;
  static GroupFunction from_values(const FinAbGroup& g, std::vector<Complex> values);
  static GroupFunction from_phases(const FinAbGroup& g, std::int64_t modulus, std::vector<std::int64_t> numerators);
  static GroupFunction constant(const FinAbGroup& g, Complex c);

  const FinAbGroup& group() const noexcept { return group_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  Complex operator[](Code x) const { return values_[x]; }

  bool is_exact() const noexcept { return modulus_ > 0; }
  std::int64_t modulus() const noexcept { return modulus_; }
  const std::vector<std::int64_t>& numerators() const noexcept { return numerators_; }

  bool is_one_bounded(double tol = 1e-12) const;

  /// Pointwise product; exact when both factors are exact.
  GroupFunction operator*(const GroupFunction& o) const;
  GroupFunction conj() const;
  /// x |-> f(x + a)
  GroupFunction translate(const Element& a) const;

 private:
  FinAbGroup group_;
  std::vector<Complex> values_;
  std::int64_t modulus_ = 0;
  std::vector<std::int64_t> numerators_;
};

/// ∥f∥_{U^order} via the multiplicative-derivative recursion.
double gowers_norm(const GroupFunction& f, int order, std::uint64_t cap = kDefaultCostCap);

/// |G|^{order+1} ∥f∥_{U^order}^{2^order} as an exact cyclotomic integer.
CyclotomicSum gowers_power_exact(const GroupFunction& f, int order, std::uint64_t cap = kDefaultCostCap);
/// ∥f∥_{U^order} evaluated from the exact sum.
double gowers_norm_exact(const GroupFunction& f, int order, std::uint64_t cap = kDefaultCostCap);

/// E_x f(x) conj(g(x))
Complex correlation(const GroupFunction& f, const GroupFunction& g);

/// e(P(x)/N) for a certified polynomial P into Z_N.
GroupFunction phase(const PolyMap& p);

/// Random phase polynomial of degree <= k into Z_N, N = torsion(G).
PolyMap random_phase_polynomial(const FinAbGroup& g, int k, std::mt19937_64& rng);

struct ProjectedPhase {
  PolyMap base;        // φ: B -> Z_N
  Homomorphism tau;    // B ->> A
  Degree degree;       // certified degree of φ
  GroupFunction table;  // φ_{*τ} on A
  std::vector<CyclotomicSum> fiber_sums;  // exact Σ_{y ∈ τ^{-1}(x)} e(φ(y)/N)
  std::uint64_t fiber_size = 0;
  std::int64_t torsion = 1;         // m, torsion of A
  std::int64_t source_torsion = 1;  // m', torsion of B
  bool rank_preserving = false;

  /// Exact test φ_{*τ}(x) = 0.
  bool vanishes_at(Code x) const { return fiber_sums[x].is_zero(); }
};

ProjectedPhase project_phase(const PolyMap& phi, const Homomorphism& tau);

struct ObstructionReport {
  double correlation = 0;  // |⟨f, φ_{*τ}⟩|
  double norm = 0;         // ∥f∥_{U^{k+1}}
  int k = 0;
  bool holds = false;
};

/// Compares |⟨f, φ_{*τ}⟩| with ∥f∥_{U^{k+1}} for a 1-bounded f.
ObstructionReport obstruction_check(const GroupFunction& f, const ProjectedPhase& pp, int k, double tol = 1e-9,
                                    std::uint64_t cap = kDefaultCostCap);

struct AverageFamily {
  std::vector<Code> kernel;             // u ∈ ker τ, in code order
  std::vector<PolyMap> phases;          // φ ∘ ι_u
  std::vector<GroupFunction> members;   // e(φ ∘ ι_u)
  std::vector<Degree> degrees;
  Degree cross_section_degree;
  int degree_bound = 0;                 // deg(ι) · deg(φ)
};

/// Writes φ_{*τ} as E_u e(φ ∘ ι_u) with ι_u = ι + u; both claims are checked exactly.
AverageFamily projected_as_average(const ProjectedPhase& pp, const PolyMap& iota);

/// 4-cycle norm on A x B where A is the first `split` coordinates.
double box_norm_4cycle(const GroupFunction& f, std::size_t split);

struct CutNormOptions {
  int restarts = 8;
  int iterations = 100;
  std::uint64_t seed = 0;
};

struct CutNormResult {
  double value = 0;
  std::vector<std::vector<std::size_t>> subsets;  // B ∈ C([n], d)
  std::vector<std::vector<Complex>> witnesses;    // u_B, row-major over the blocks in B
  std::vector<double> trace;                      // best start, value after each sweep
};

/// Lower bound for the (n,d)-cut norm on A_1 x ... x A_n, where block i
/// consists of `block_sizes[i]` consecutive coordinates.
CutNormResult cut_norm_lower(const GroupFunction& f, const std::vector<std::size_t>& block_sizes, int d,
                             const CutNormOptions& opts = {});

}  // namespace hofa
