#pragma once

// Independent oracles used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "gbelab/tridiagonal.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense dense(const gbelab::TridiagonalMatrix& t) {
  const std::size_t n = t.size();
  Dense m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = t.diag[i];
    if (i + 1 < n) m[i][i + 1] = m[i + 1][i] = t.offdiag[i];
  }
  return m;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Tr(T^r) by dense repeated multiplication.
inline double dense_trace_power(const gbelab::TridiagonalMatrix& t, unsigned r) {
  const Dense m = dense(t);
  const std::size_t n = m.size();
  Dense p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1.0;
  for (unsigned k = 0; k < r; ++k) p = multiply(p, m);
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += p[i][i];
  return tr;
}

// Number of sign changes in the leading principal minors of T - xI, computed
// by the three-term determinant recursion (unnormalized).
inline std::size_t minors_sign_changes(const gbelab::TridiagonalMatrix& t, double x) {
  long double prev = 1.0L, cur = t.diag[0] - x;
  std::size_t changes = 0;
  auto sign = [](long double v) { return v < 0 ? -1 : 1; };
  if (sign(cur) != sign(prev)) ++changes;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const long double b = t.offdiag[i - 1];
    const long double next = (t.diag[i] - x) * cur - b * b * prev;
    if (sign(next) != sign(cur)) ++changes;
    prev = cur;
    cur = next;
    // keep the recursion in range without changing signs
    const long double scale = std::max(std::fabs(cur), std::fabs(prev));
    if (scale > 1e100L) {
      cur /= scale;
      prev /= scale;
    }
  }
  return changes;
}

// Roots of det(T - xI) by bisection on the minor sign-change count.
inline std::vector<double> charpoly_eigenvalues(const gbelab::TridiagonalMatrix& t) {
  const std::size_t n = t.size();
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  lo -= 1.0;
  hi += 1.0;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      if (minors_sign_changes(t, mid) > k) b = mid; else a = mid;
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

// M_r by (r+2) M_r = (2r+1) M_{r-1} + 3(r-1) M_{r-2}.
inline std::uint64_t motzkin_number(unsigned r) {
  std::vector<std::uint64_t> m{1, 1};
  for (unsigned k = 2; k <= r; ++k) {
    m.push_back(((2 * k + 1) * m[k - 1] + 3 * (k - 1) * m[k - 2]) / (k + 2));
  }
  return m[r];
}

// Coefficient of x^r in (1 + x + x^2)^r.
inline std::uint64_t central_trinomial(unsigned r) {
  std::vector<std::uint64_t> poly{1};
  for (unsigned k = 0; k < r; ++k) {
    std::vector<std::uint64_t> next(poly.size() + 2, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += poly[i];
      next[i + 2] += poly[i];
    }
    poly = std::move(next);
  }
  return poly[r];
}

// All step strings over {-1,0,1} of length r, filtered to closed ones.
inline std::vector<std::vector<int>> brute_closed(unsigned r, bool nonnegative) {
  std::vector<std::vector<int>> out;
  std::size_t total = 1;
  for (unsigned i = 0; i < r; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> steps(r);
    std::size_t c = code;
    int level = 0;
    bool ok = true;
    for (unsigned i = 0; i < r; ++i) {
      steps[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
      level += steps[i];
      if (nonnegative && level < 0) ok = false;
    }
    if (ok && level == 0) out.push_back(steps);
  }
  return out;
}

}  // namespace oracle
