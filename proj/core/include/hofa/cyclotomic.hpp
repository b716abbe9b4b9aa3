#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hofa {

/// Exact element of Z[ζ_N] written as Σ_a c_a e(a/N).
///
/// Equality is decided by reducing Σ c_a x^a modulo the cyclotomic
/// polynomial Φ_N, so two sums with different count vectors can compare equal.
class CyclotomicSum {
 public:
  CyclotomicSum() = default;
  explicit CyclotomicSum(std::int64_t n);

  std::int64_t modulus() const noexcept { return n_; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  /// Adds count * e(a/N).
  void add(std::int64_t a, std::int64_t count = 1);
  CyclotomicSum& operator+=(const CyclotomicSum& o);
  CyclotomicSum& operator-=(const CyclotomicSum& o);
  friend CyclotomicSum operator-(CyclotomicSum a, const CyclotomicSum& b) { return a -= b; }

  bool is_zero() const;
  bool equals(const CyclotomicSum& o) const { return (*this - o).is_zero(); }
  /// True when the sum equals the rational integer v.
  bool equals_integer(std::int64_t v) const;

  std::complex<long double> value() const;

 private:
  std::int64_t n_ = 1;
  std::vector<std::int64_t> counts_{0};
};

/// Integer coefficients of Φ_n, constant term first.
std::vector<std::int64_t> cyclotomic_polynomial(std::int64_t n);

}  // namespace hofa
