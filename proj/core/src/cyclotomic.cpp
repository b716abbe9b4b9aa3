#include "hofa/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

#include "hofa/errors.hpp"
#include "hofa/smith.hpp"

namespace hofa {

using boost::multiprecision::cpp_int;

std::vector<std::int64_t> cyclotomic_polynomial(std::int64_t n) {
  if (n < 1) throw ValidationError("cyclotomic polynomial index must be >= 1");
  static std::mutex mu;
  static std::map<std::int64_t, std::vector<std::int64_t>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }

  // Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d, by exact long division.
  std::vector<std::int64_t> num(static_cast<std::size_t>(n) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (std::int64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const std::vector<std::int64_t> den = cyclotomic_polynomial(d);
    std::vector<std::int64_t> q(num.size() - den.size() + 1, 0);
    for (std::size_t i = q.size(); i-- > 0;) {
      const std::int64_t c = num[i + den.size() - 1];
      q[i] = c;
      for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    num = std::move(q);
  }
  std::lock_guard lock(mu);
  cache.emplace(n, num);
  return num;
}

CyclotomicSum::CyclotomicSum(std::int64_t n) : n_(n), counts_(static_cast<std::size_t>(n), 0) {
  if (n < 1) throw ValidationError("cyclotomic modulus must be >= 1");
}

void CyclotomicSum::add(std::int64_t a, std::int64_t count) {
  auto& c = counts_[static_cast<std::size_t>(mod_floor(a, n_))];
  c = checked_add(c, count);
}

CyclotomicSum& CyclotomicSum::operator+=(const CyclotomicSum& o) {
  if (o.n_ != n_) throw ValidationError("cyclotomic sums with different moduli");
  for (std::size_t a = 0; a < counts_.size(); ++a) counts_[a] = checked_add(counts_[a], o.counts_[a]);
  return *this;
}

CyclotomicSum& CyclotomicSum::operator-=(const CyclotomicSum& o) {
  if (o.n_ != n_) throw ValidationError("cyclotomic sums with different moduli");
  for (std::size_t a = 0; a < counts_.size(); ++a) counts_[a] = checked_add(counts_[a], -o.counts_[a]);
  return *this;
}

bool CyclotomicSum::is_zero() const {
  const std::vector<std::int64_t> phi = cyclotomic_polynomial(n_);
  const std::size_t deg = phi.size() - 1;
  std::vector<cpp_int> r(counts_.begin(), counts_.end());
  for (std::size_t i = r.size(); i-- > deg;) {
    if (r[i] == 0) continue;
    const cpp_int c = r[i];
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  for (std::size_t i = 0; i < deg && i < r.size(); ++i) {
    if (r[i] != 0) return false;
  }
  return true;
}

bool CyclotomicSum::equals_integer(std::int64_t v) const {
  CyclotomicSum c(n_);
  c.add(0, v);
  return equals(c);
}

std::complex<long double> CyclotomicSum::value() const {
  std::complex<long double> s = 0;
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    if (counts_[a] == 0) continue;
    const long double t = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(a) / n_;
    s += static_cast<long double>(counts_[a]) * std::complex<long double>(std::cos(t), std::sin(t));
  }
  return s;
}

}  // namespace hofa
