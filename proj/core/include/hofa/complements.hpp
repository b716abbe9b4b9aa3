#pragma once

#include <cstdint>
#include <vector>

#include "hofa/groups.hpp"

namespace hofa {

/// A subgroup together with a verified complement in the parent group.
struct ComplementedSubgroup {
  Subgroup subgroup;
  Subgroup complement;
};

struct HullResult : ComplementedSubgroup {
  std::vector<Element> blocks;  // one generator per round, disjoint supports
  std::uint64_t bound = 0;      // p^{n^2}
};

struct EnlargeResult : ComplementedSubgroup {
  std::uint64_t bound = 0;  // p^{n^2 r}
};

struct ShrinkResult : ComplementedSubgroup {
  std::uint64_t index = 0;  // [H : H']
  std::uint64_t bound = 0;  // r^{n^2+n}, saturating
};

/// Complemented subgroup H of a p-group A with x in H and |H| <= p^{n^2}.
///
/// Each round strips p-th roots, peels off the unit coordinates as one
/// block and continues on p^{-1} times the remainder.  The complement is the
/// coordinate subgroup that omits one maximal-order coordinate per block.
HullResult complemented_hull(const FinAbGroup& a, const Element& x);

/// Complemented H' containing the subgroup generated by `gens`, |H'| <= p^{n^2 r}.
EnlargeResult complemented_enlarge(const FinAbGroup& a, const std::vector<Element>& gens);
EnlargeResult complemented_enlarge(const Subgroup& h);

/// Complemented H' <= H with [H : H'] <= r^{n^2+n}, r = [A : H], for a p-group A.
ShrinkResult complemented_shrink(const Subgroup& h);

/// complemented_shrink on each primary component of an arbitrary finite
/// abelian group, recombined through the CRT injections.
ShrinkResult mtorsion_complemented_shrink(const Subgroup& h);

}  // namespace hofa
