#pragma once

#include <cstdint>
#include <vector>

namespace hofa {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Smith normal form with unimodular transforms: left * input * right = diagonal.
///
/// `left_inv` and `right_inv` are the exact integer inverses of `left` and
/// `right`.  The diagonal entries d_0 | d_1 | ... are non-negative.  All
/// arithmetic is overflow checked and throws CapExceeded on overflow.
struct SmithForm {
  IntMatrix diagonal;
  IntMatrix left;
  IntMatrix left_inv;
  IntMatrix right;
  IntMatrix right_inv;
  std::vector<std::int64_t> invariants;  // min(rows, cols) diagonal entries
  std::size_t rank = 0;                  // number of nonzero invariants
};

SmithForm smith_normal_form(const IntMatrix& input, std::size_t rows, std::size_t cols);

IntMatrix identity_matrix(std::size_t n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Non-negative remainder.
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Inverse of a modulo m; throws HypothesisError when gcd(a, m) != 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// Saturating a^e (returns UINT64_MAX on overflow).
std::uint64_t saturating_pow(std::uint64_t a, std::uint64_t e);

}  // namespace hofa
