#include "hofa/smith.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "hofa/errors.hpp"

namespace hofa {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw CapExceeded("integer overflow in exact arithmetic", 0, 0);
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw CapExceeded("integer overflow in exact arithmetic", 0, 0);
  }
  return out;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t old_r = mod_floor(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) {
    throw HypothesisError(std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  }
  return mod_floor(old_s, m);
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t saturating_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (a != 0 && r > std::numeric_limits<std::uint64_t>::max() / a) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r *= a;
  }
  return r;
}

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t rows = a.size();
  const std::size_t inner = b.size();
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  IntMatrix out(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        out[i][j] = checked_add(out[i][j], checked_mul(a[i][k], b[k][j]));
      }
    }
  }
  return out;
}

namespace {

// Elementary operations applied simultaneously to the working matrix and the
// transforms.  Row ops act on (a, left) and dually on left_inv; column ops
// act on (a, right) and dually on right_inv.
struct Reducer {
  SmithForm& f;
  std::size_t rows, cols;

  IntMatrix& a() { return f.diagonal; }

  // row_i += q * row_t
  void row_addmul(std::size_t i, std::size_t t, std::int64_t q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j) a()[i][j] = checked_add(a()[i][j], checked_mul(q, a()[t][j]));
    for (std::size_t j = 0; j < rows; ++j) f.left[i][j] = checked_add(f.left[i][j], checked_mul(q, f.left[t][j]));
    // left_inv <- left_inv * E^{-1}: col_t -= q * col_i
    for (std::size_t j = 0; j < rows; ++j) {
      f.left_inv[j][t] = checked_add(f.left_inv[j][t], checked_mul(-q, f.left_inv[j][i]));
    }
  }
  void row_swap(std::size_t i, std::size_t t) {
    if (i == t) return;
    std::swap(a()[i], a()[t]);
    std::swap(f.left[i], f.left[t]);
    for (std::size_t j = 0; j < rows; ++j) std::swap(f.left_inv[j][i], f.left_inv[j][t]);
  }
  void row_negate(std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) a()[i][j] = -a()[i][j];
    for (std::size_t j = 0; j < rows; ++j) f.left[i][j] = -f.left[i][j];
    for (std::size_t j = 0; j < rows; ++j) f.left_inv[j][i] = -f.left_inv[j][i];
  }
  // col_j += q * col_t
  void col_addmul(std::size_t j, std::size_t t, std::int64_t q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows; ++i) a()[i][j] = checked_add(a()[i][j], checked_mul(q, a()[i][t]));
    for (std::size_t i = 0; i < cols; ++i) f.right[i][j] = checked_add(f.right[i][j], checked_mul(q, f.right[i][t]));
    // right_inv <- E^{-1} * right_inv: row_t -= q * row_j
    for (std::size_t i = 0; i < cols; ++i) {
      f.right_inv[t][i] = checked_add(f.right_inv[t][i], checked_mul(-q, f.right_inv[j][i]));
    }
  }
  void col_swap(std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(a()[i][j], a()[i][t]);
    for (std::size_t i = 0; i < cols; ++i) std::swap(f.right[i][j], f.right[i][t]);
    std::swap(f.right_inv[j], f.right_inv[t]);
  }

  // Move the smallest nonzero entry of the trailing block to (t, t).
  bool bring_min_pivot(std::size_t t) {
    std::size_t bi = rows, bj = cols;
    std::int64_t best = 0;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        const std::int64_t v = std::llabs(a()[i][j]);
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (best == 0) return false;
    row_swap(t, bi);
    col_swap(t, bj);
    return true;
  }

  void reduce(std::size_t t) {
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a()[i][t] == 0) continue;
        row_addmul(i, t, -(a()[i][t] / a()[t][t]));
        if (a()[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a()[t][j] == 0) continue;
        col_addmul(j, t, -(a()[t][j] / a()[t][t]));
        if (a()[t][j] != 0) dirty = true;
      }
      if (dirty) {
        bring_min_pivot(t);
        continue;
      }
      // Divisibility: the pivot must divide the whole trailing block.
      bool fixed = false;
      for (std::size_t i = t + 1; i < rows && !fixed; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a()[i][j] % a()[t][t] != 0) {
            row_addmul(t, i, 1);
            fixed = true;
            break;
          }
        }
      }
      if (!fixed) break;
      bring_min_pivot(t);
    }
    if (a()[t][t] < 0) row_negate(t);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input, std::size_t rows, std::size_t cols) {
  SmithForm f;
  f.diagonal = IntMatrix(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t i = 0; i < rows && i < input.size(); ++i) {
    for (std::size_t j = 0; j < cols && j < input[i].size(); ++j) f.diagonal[i][j] = input[i][j];
  }
  f.left = identity_matrix(rows);
  f.left_inv = identity_matrix(rows);
  f.right = identity_matrix(cols);
  f.right_inv = identity_matrix(cols);

  Reducer r{f, rows, cols};
  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    if (!r.bring_min_pivot(t)) break;
    r.reduce(t);
  }
  f.invariants.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    f.invariants[t] = f.diagonal[t][t];
    if (f.invariants[t] != 0) ++f.rank;
  }
  return f;
}

}  // namespace hofa
