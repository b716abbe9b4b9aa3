#include <algorithm>

#include "hofa/polymaps.hpp"

namespace hofa {

namespace {

int exponent_of(std::int64_t order, std::int64_t p) {
  int e = 0;
  while (order > 1) {
    order /= p;
    ++e;
  }
  return e;
}

// Common prime of two (possibly trivial) p-groups; 1 when both are trivial.
std::int64_t common_prime(const FinAbGroup& b, const FinAbGroup& a) {
  std::optional<std::int64_t> pb = b.prime(), pa = a.prime();
  if ((!pb && !b.is_trivial()) || (!pa && !a.is_trivial())) {
    throw HypothesisError("decompose_surjection needs p-groups, got " + b.to_string() + " -> " + a.to_string());
  }
  if (pb && pa && *pb != *pa) throw HypothesisError("decompose_surjection: mixed primes");
  return pb ? *pb : (pa ? *pa : 1);
}

Homomorphism elementary(const FinAbGroup& g, std::size_t row, std::size_t col, std::int64_t value) {
  IntMatrix e = identity_matrix(g.num_factors());
  e[row][col] = mod_floor(value, g.orders()[row]);
  return Homomorphism(g, g, std::move(e));
}

}  // namespace

Homomorphism SurjectionDecomposition::inner_with_identity() const {
  const FinAbGroup& bp = p.codomain();
  const FinAbGroup& ap = s.domain();
  const std::size_t rb = inner.domain().num_factors();
  const std::size_t ra = inner.codomain().num_factors();
  IntMatrix mat(ap.num_factors(), std::vector<std::int64_t>(bp.num_factors(), 0));
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t j = 0; j < rb; ++j) mat[i][j] = inner.matrix()[i][j];
  }
  for (std::size_t k = 0; k < m; ++k) mat[ra + k][rb + k] = 1;
  return Homomorphism(bp, ap, std::move(mat));
}

SurjectionDecomposition decompose_surjection(const Homomorphism& mor) {
  const FinAbGroup& b = mor.domain();
  const FinAbGroup& a = mor.codomain();
  const std::int64_t prime = common_prime(b, a);
  if (!mor.is_surjective()) throw HypothesisError("decompose_surjection: map is not surjective");

  SurjectionDecomposition out;
  out.prime = prime;
  out.n = b.is_trivial() ? 0 : b.torsion_exponent();
  const int n = out.n;
  const std::int64_t pn = static_cast<std::int64_t>(saturating_pow(prime, n));

  std::vector<int> alpha, beta;
  for (auto o : a.orders()) alpha.push_back(exponent_of(o, prime));
  for (auto o : b.orders()) beta.push_back(exponent_of(o, prime));

  Homomorphism rows = Homomorphism::identity(a);
  Homomorphism cols = Homomorphism::identity(b);
  auto current = [&] { return rows.compose(mor).compose(cols).matrix(); };

  std::vector<std::size_t> top_rows;
  for (std::size_t i = 0; i < a.num_factors(); ++i) {
    if (n > 0 && alpha[i] == n) top_rows.push_back(i);
  }

  for (std::size_t i : top_rows) {
    IntMatrix w = current();
    std::size_t j = b.num_factors();
    for (std::size_t c = 0; c < b.num_factors(); ++c) {
      if (beta[c] == n && w[i][c] % prime != 0 &&
          std::find(out.pivots.begin(), out.pivots.end(), c) == out.pivots.end()) {
        j = c;
        break;
      }
    }
    if (j == b.num_factors()) throw HypothesisError("decompose_surjection: no unit pivot, map is not surjective");

    rows = elementary(a, i, i, mod_inverse(w[i][j], pn)).compose(rows);
    w = current();
    for (std::size_t r = 0; r < a.num_factors(); ++r) {
      if (r != i && w[r][j] != 0) rows = elementary(a, r, i, -w[r][j]).compose(rows);
    }
    w = current();
    IntMatrix e = identity_matrix(b.num_factors());
    for (std::size_t c = 0; c < b.num_factors(); ++c) {
      if (c != j) e[j][c] = mod_floor(-w[i][c], pn);
    }
    cols = cols.compose(Homomorphism(b, b, std::move(e)));
    out.pivots.push_back(j);
  }
  out.m = out.pivots.size();
  const IntMatrix w = current();

  for (std::size_t k = 0; k < out.m; ++k) {
    for (std::size_t r = 0; r < a.num_factors(); ++r) {
      for (std::size_t c = 0; c < b.num_factors(); ++c) {
        const bool on_row = r == top_rows[k], on_col = c == out.pivots[k];
        if ((on_row || on_col) && w[r][c] != (on_row && on_col ? 1 : 0)) {
          throw InvariantViolation("decompose_surjection: pivot elimination left residue");
        }
      }
    }
  }

  // B' = non-pivot coordinates, order-p^n ones reduced mod p^{n-1}.
  std::vector<std::int64_t> bprime_orders;
  for (std::size_t c = 0; c < b.num_factors(); ++c) {
    if (std::find(out.pivots.begin(), out.pivots.end(), c) != out.pivots.end()) continue;
    const std::int64_t o = beta[c] == n ? pn / prime : b.orders()[c];
    if (o <= 1) continue;
    out.reduced_domain.push_back(c);
    bprime_orders.push_back(o);
  }
  std::vector<std::size_t> aprime_rows;
  std::vector<std::int64_t> aprime_orders;
  for (std::size_t r = 0; r < a.num_factors(); ++r) {
    if (std::find(top_rows.begin(), top_rows.end(), r) != top_rows.end() || a.orders()[r] == 1) continue;
    aprime_rows.push_back(r);
    aprime_orders.push_back(a.orders()[r]);
  }
  const FinAbGroup bprime(bprime_orders), aprime(aprime_orders);

  std::vector<std::int64_t> bp_orders = bprime_orders, ap_orders = aprime_orders;
  bp_orders.insert(bp_orders.end(), out.m, pn);
  ap_orders.insert(ap_orders.end(), out.m, pn);
  const FinAbGroup bp(bp_orders), ap(ap_orders);

  IntMatrix pm(bp.num_factors(), std::vector<std::int64_t>(b.num_factors(), 0));
  for (std::size_t r = 0; r < out.reduced_domain.size(); ++r) pm[r][out.reduced_domain[r]] = 1;
  for (std::size_t k = 0; k < out.m; ++k) pm[out.reduced_domain.size() + k][out.pivots[k]] = 1;
  out.p = Homomorphism(b, bp, std::move(pm));

  IntMatrix im(aprime.num_factors(), std::vector<std::int64_t>(bprime.num_factors(), 0));
  for (std::size_t r = 0; r < aprime_rows.size(); ++r) {
    for (std::size_t c = 0; c < out.reduced_domain.size(); ++c) im[r][c] = w[aprime_rows[r]][out.reduced_domain[c]];
  }
  out.inner = Homomorphism(bprime, aprime, std::move(im));

  IntMatrix lm(a.num_factors(), std::vector<std::int64_t>(ap.num_factors(), 0));
  for (std::size_t r = 0; r < aprime_rows.size(); ++r) lm[aprime_rows[r]][r] = 1;
  for (std::size_t k = 0; k < out.m; ++k) lm[top_rows[k]][aprime_rows.size() + k] = 1;
  const Homomorphism layout(ap, a, std::move(lm));

  out.s = rows.inverse().compose(layout);
  out.t = cols.inverse();

  const Homomorphism rebuilt = out.s.compose(out.inner_with_identity()).compose(out.p).compose(out.t);
  for (Code x = 0; x < b.order(); ++x) {
    if (rebuilt.apply_code(x) != mor.apply_code(x)) {
      throw InvariantViolation("decompose_surjection: S∘(A,id)∘P∘T differs from M");
    }
  }
  if (!out.s.is_bijective() || !out.t.is_bijective()) throw InvariantViolation("decompose_surjection: S or T not bijective");
  return out;
}

namespace {

// Cross-section of a surjection between p-groups, as a table on A.
std::vector<Element> cross_section_p(const Homomorphism& tau) {
  const FinAbGroup& a = tau.codomain();
  const FinAbGroup& b = tau.domain();
  if (a.is_trivial()) return std::vector<Element>(a.order(), b.zero());

  const SurjectionDecomposition d = decompose_surjection(tau);
  const std::vector<Element> inner = cross_section_p(d.inner);
  const Homomorphism s_inv = d.s.inverse();
  const Homomorphism t_inv = d.t.inverse();
  const std::size_t ra = d.inner.codomain().num_factors();
  const std::size_t rb = d.reduced_domain.size();

  std::vector<Element> table(a.order());
  for (Code x = 0; x < a.order(); ++x) {
    const Element y = s_inv.apply(a.decode(x));
    const Element head(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(ra));
    const Element& lifted = inner[d.inner.codomain().encode(head)];
    // Representative lift through P: reduced coordinates keep their integer value.
    Element v = b.zero();
    for (std::size_t r = 0; r < rb; ++r) v[d.reduced_domain[r]] = lifted[r];
    for (std::size_t k = 0; k < d.m; ++k) v[d.pivots[k]] = y[ra + k];
    table[x] = t_inv.apply(v);
  }
  return table;
}

}  // namespace

PolyMap polynomial_cross_section(const Homomorphism& tau) {
  const FinAbGroup& a = tau.codomain();
  const FinAbGroup& b = tau.domain();
  if (!tau.is_surjective()) throw HypothesisError("polynomial_cross_section: map is not surjective");

  const PrimaryDecomposition pa = primary_decompose(a);
  const PrimaryDecomposition pb = primary_decompose(b);
  std::vector<Element> table(a.order(), b.zero());
  for (std::int64_t p : pa.primes) {
    const Homomorphism proj = pa.projection(p);
    const Homomorphism inj = pb.injection(p);
    const std::vector<Element> part = cross_section_p(proj.compose(tau).compose(inj));
    for (Code x = 0; x < a.order(); ++x) {
      const Element px = proj.apply(a.decode(x));
      table[x] = b.add(table[x], inj.apply(part[proj.codomain().encode(px)]));
    }
  }
  PolyMap iota = PolyMap::from_table(a, b, table);
  for (Code x = 0; x < a.order(); ++x) {
    if (tau.apply(iota.at(x)) != a.decode(x)) throw InvariantViolation("polynomial_cross_section: τ∘ι ≠ id");
  }
  return iota;
}

}  // namespace hofa
