#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbelab/tridiagonal.hpp"

namespace gbelab {

struct EigenResult {
  std::vector<double> values;  // ascending
  std::size_t iterations = 0;
  bool converged = false;
};

// Raised when an unreduced block fails to split within the sweep cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::size_t block_start, std::size_t iterations)
      : std::runtime_error("tridiagonal QL did not converge for block starting at index " +
                           std::to_string(block_start) + " after " + std::to_string(iterations) +
                           " sweeps"),
        block_start_(block_start) {}
  std::size_t block_start() const { return block_start_; }

 private:
  std::size_t block_start_;
};

inline constexpr std::size_t kMaxSweepsPerEigenvalue = 50;

// All eigenvalues of a real symmetric tridiagonal matrix by implicit QL with a
// Wilkinson-type shift (values only). An off-diagonal entry is treated as zero
// once |b_i| <= eps * (|a_i| + |a_{i+1}|).
inline EigenResult eigenvalues(const TridiagonalMatrix& t) {
  t.validate();
  const auto n = static_cast<std::ptrdiff_t>(t.size());
  std::vector<double> d = t.diag;
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  constexpr double eps = std::numeric_limits<double>::epsilon();

  EigenResult result;
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    std::size_t sweeps = 0;
    std::ptrdiff_t m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == kMaxSweepsPerEigenvalue) {
        throw ConvergenceError(static_cast<std::size_t>(l), sweeps - 1);
      }
      ++result.iterations;
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      std::ptrdiff_t i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::stable_sort(d.begin(), d.end());
  result.values = std::move(d);
  result.converged = true;
  return result;
}

// Number of eigenvalues strictly below t, from the sign changes of the LDL^T
// pivots of T - t I (Sturm sequence). A zero pivot means t sits on an
// eigenvalue of a leading block; t is then nudged down by 1e-14 * scale.
inline std::size_t eigen_count_below(const TridiagonalMatrix& t, double threshold) {
  t.validate();
  const std::size_t n = t.size();
  const double scale = std::max(1.0, t.norm_inf());
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::size_t count = 0;
    double q = t.diag[0] - threshold;
    bool hit_zero = q == 0.0;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n && !hit_zero; ++i) {
      const double b = t.offdiag[i - 1];
      q = (t.diag[i] - threshold) - b * (b / q);
      if (q == 0.0) hit_zero = true;
      if (q < 0.0) ++count;
    }
    if (!hit_zero) return count;
    threshold -= 1e-14 * scale;
  }
  throw std::runtime_error("eigen_count_below: could not move off a zero pivot");
}

// Sum of f over the spectrum, accumulated in ascending magnitude of the terms.
template <class F>
double linear_statistic(const EigenResult& e, F&& f) {
  if (!e.converged) throw std::invalid_argument("linear_statistic needs a converged spectrum");
  std::vector<double> terms;
  terms.reserve(e.values.size());
  for (double x : e.values) terms.push_back(f(x));
  std::sort(terms.begin(), terms.end(),
            [](double lhs, double rhs) { return std::abs(lhs) < std::abs(rhs); });
  double sum = 0.0;
  for (double v : terms) sum += v;
  return sum;
}

}  // namespace gbelab
