#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "gbelab/exact_moments.hpp"
#include "gbelab/paths.hpp"
#include "gbelab/polynomial.hpp"
#include "gbelab/tridiagonal.hpp"

// Martingale decomposition of S_n = Tr p(T) along the filtration
// F_k = sigma(a_i, b_i : i <= k). For a path weight xi_w,
//   Delta_k(xi_w) = xi_w^(-) (a_k^alpha_k b_k^(2 gamma_k) - E[...]) E[xi_w^(+)]
// where (-) collects sites < k (realized) and (+) sites > k (expected).

namespace gbelab {

namespace detail {

inline void require_gbe(const TridiagonalMatrix& t) {
  if (!(t.beta > 0.0)) {
    throw std::invalid_argument("martingale quantities need a G-beta-E matrix (beta > 0)");
  }
}

inline double entry_power(const TridiagonalMatrix& t, std::size_t site, unsigned alpha,
                          unsigned gamma) {
  double out = 1.0;
  if (alpha) out *= std::pow(t.a(site), static_cast<int>(alpha));
  if (gamma) {
    const double b = t.b(site);
    out *= std::pow(b * b, static_cast<int>(gamma));
  }
  return out;
}

}  // namespace detail

// Delta_k(xi_{j+w}) on the realized matrix T.
inline double martingale_delta(const ClosedPath& w, long start, std::size_t k,
                               const TridiagonalMatrix& t) {
  detail::require_gbe(t);
  const std::size_t n = t.size();
  if (!admissible_window(w, n).contains(start)) {
    throw std::invalid_argument("martingale_delta: path " + w.to_string() + " at start " +
                                std::to_string(start) + " is not admissible for n = " +
                                std::to_string(n));
  }
  if (k < 1 || k > n) throw std::invalid_argument("martingale_delta: k must lie in 1..n");

  const ExponentProfile prof = exponent_profile(w);
  const long rel_k = static_cast<long>(k) - start;
  const unsigned alpha_k = prof.alpha_at(static_cast<int>(rel_k));
  const unsigned gamma_k = prof.gamma_at(static_cast<int>(rel_k));
  if (alpha_k == 0 && gamma_k == 0) return 0.0;

  double before = 1.0;
  double after = 1.0;
  for (int rel = prof.first_site; rel <= prof.last_site(); ++rel) {
    const unsigned al = prof.alpha_at(rel);
    const unsigned ga = prof.gamma_at(rel);
    if (al == 0 && ga == 0) continue;
    const auto site = static_cast<std::size_t>(start + rel);
    if (site < k) {
      before *= detail::entry_power(t, site, al, ga);
    } else if (site > k) {
      after *= entry_moment_value(site, al, ga, n, t.beta);
    }
  }
  const double center = detail::entry_power(t, k, alpha_k, gamma_k) -
                        entry_moment_value(k, alpha_k, gamma_k, n, t.beta);
  return before * center * after;
}

namespace detail {

struct PathShape {
  ClosedPath path;
  ExponentProfile profile;
};

inline const std::vector<PathShape>& closed_path_shapes(unsigned r) {
  thread_local std::map<unsigned, std::vector<PathShape>> cache;
  if (auto it = cache.find(r); it != cache.end()) return it->second;
  std::vector<PathShape> shapes;
  for (auto& w : enumerate_closed(r)) {
    auto prof = exponent_profile(w);
    shapes.push_back({std::move(w), std::move(prof)});
  }
  return cache.emplace(r, std::move(shapes)).first->second;
}

}  // namespace detail

// Y_k = E[S_n | F_k] - E[S_n | F_{k-1}] for S_n = Tr p(T): the sum of
// c_r Delta_k(xi) over admissible paths of length r <= deg p. Only paths whose
// range covers k contribute, so Y_k reads entries within deg(p)/2 of k.
inline double martingale_increment_Y(std::size_t k, const Polynomial& p,
                                     const TridiagonalMatrix& t) {
  detail::require_gbe(t);
  if (p.degree() > kMaxPathLength) throw std::invalid_argument("polynomial degree above path cap");
  const std::size_t n = t.size();
  double total = 0.0;
  for (unsigned r = 1; r <= p.degree(); ++r) {
    const double c = p.coeff(r).get_d();
    if (c == 0.0) continue;
    double partial = 0.0;
    for (const auto& shape : detail::closed_path_shapes(r)) {
      const auto window = admissible_window(shape.path, n);
      const long lo = std::max(window.first, static_cast<long>(k) - shape.path.max_level());
      const long hi = std::min(window.last, static_cast<long>(k) - shape.path.min_level());
      for (long j = lo; j <= hi; ++j) partial += martingale_delta(shape.path, j, k, t);
    }
    total += c * partial;
  }
  return total;
}

inline std::vector<double> martingale_increments(const Polynomial& p, const TridiagonalMatrix& t) {
  std::vector<double> out(t.size());
  for (std::size_t k = 1; k <= t.size(); ++k) out[k - 1] = martingale_increment_Y(k, p, t);
  return out;
}

// Tr(T^r) for r = 0..max_power by banded multiplication, O(n max_power^2).
inline std::vector<double> power_traces(const TridiagonalMatrix& t, unsigned max_power) {
  const std::size_t n = t.size();
  std::vector<double> traces(max_power + 1, 0.0);
  traces[0] = static_cast<double>(n);
  if (max_power == 0) return traces;
  // Row i of M = T^r holds M(i, i + d) for d in [-r, r] at offset d + r.
  std::vector<double> cur(n, 1.0), next;
  for (unsigned r = 1; r <= max_power; ++r) {
    const std::size_t w_old = 2 * (r - 1) + 1, w_new = 2 * r + 1;
    next.assign(n * w_new, 0.0);
    const long half_old = static_cast<long>(r) - 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (long d = -half_old; d <= half_old; ++d) {
        const double m = cur[i * w_old + static_cast<std::size_t>(d + half_old)];
        if (m == 0.0) continue;
        const long col = static_cast<long>(i) + d;
        if (col < 0 || col >= static_cast<long>(n)) continue;
        const auto c = static_cast<std::size_t>(col);
        // (M T)(i, c + e) += M(i, c) T(c, c + e), e in {-1, 0, 1}
        auto at = [&](long e) -> double& {
          return next[i * w_new + static_cast<std::size_t>(d + e + static_cast<long>(r))];
        };
        at(0) += m * t.diag[c];
        if (c + 1 < n) at(1) += m * t.offdiag[c];
        if (c > 0) at(-1) += m * t.offdiag[c - 1];
      }
    }
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += next[i * w_new + r];
    traces[r] = tr;
    cur.swap(next);
  }
  return traces;
}

// Tr p(T) = sum_j p(lambda_j), without an eigendecomposition.
inline double trace_polynomial(const TridiagonalMatrix& t, const Polynomial& p) {
  const auto traces = power_traces(t, p.degree());
  double out = 0.0;
  for (unsigned r = 0; r <= p.degree(); ++r) out += p.coeff(r).get_d() * traces[r];
  return out;
}

}  // namespace gbelab
