#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gbelab/bivar_poly.hpp"
#include "gbelab/paths.hpp"
#include "gbelab/polynomial.hpp"
#include "gbelab/randsrc.hpp"
#include "gbelab/rational.hpp"

// Exact finite-n moments of the G-beta-E tridiagonal model as polynomials in
// u = 1/(n beta) and beta. Entry moments only depend on n through n beta:
//   E[a_i^2]          = 2u
//   E[b_i^(2 gamma)]  = prod_{t < gamma} (1 - i beta u + 2 t u)
// The spectral measure sits at the top-left corner; its moments are sums over
// Motzkin paths with path level l mapped to matrix site l + 1.

namespace gbelab {

// An exact formula broke one of its structural guarantees (degree bounds,
// vanishing low-order variance terms). Always an engine bug.
class StructureViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

// Sites (1-based) paired with (alpha, gamma); trailing all-zero sites trimmed.
using SiteExponents = std::vector<std::pair<unsigned, unsigned>>;

struct MomentCache {
  std::map<std::tuple<unsigned, unsigned, unsigned>, BivarPoly> entries;
  std::map<unsigned, std::map<SiteExponents, long>> motzkin_profiles;
  std::map<unsigned, BivarPoly> single;
  std::map<std::pair<unsigned, unsigned>, BivarPoly> product;
};

inline MomentCache& moment_cache() {
  thread_local MomentCache cache;
  return cache;
}

}  // namespace detail

// E[a_i^alpha b_i^(2 gamma)] for the G-beta-E entries at site i >= 1.
inline BivarPoly entry_moment(unsigned site, unsigned alpha, unsigned gamma) {
  if (site < 1) throw std::invalid_argument("entry_moment: sites are 1-based");
  auto& cache = detail::moment_cache().entries;
  const auto key = std::make_tuple(site, alpha, gamma);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  BivarPoly out;
  if (alpha % 2 == 0) {
    out = BivarPoly::term(alpha / 2, 0, gaussian_moment_exact(alpha) * pow(Rational(2), alpha / 2));
    for (unsigned t = 0; t < gamma; ++t) {
      BivarPoly factor = Rational(1);
      factor.add_term(1, 1, -Rational(site));
      factor.add_term(1, 0, Rational(2 * t));
      out *= factor;
    }
  }
  cache.emplace(key, out);
  return out;
}

// Same quantity evaluated at a concrete (n, beta), in double precision.
inline double entry_moment_value(std::size_t site, unsigned alpha, unsigned gamma, std::size_t n,
                                 double beta) {
  if (alpha % 2 == 1) return 0.0;
  const double u = 1.0 / (static_cast<double>(n) * beta);
  double out = gaussian_moment_exact(alpha).get_d() * std::pow(2.0 * u, alpha / 2);
  const double base = (static_cast<double>(n) - static_cast<double>(site)) / static_cast<double>(n);
  for (unsigned t = 0; t < gamma; ++t) out *= base + 2.0 * t * u;
  return out;
}

namespace detail {

inline SiteExponents site_exponents(const ExponentProfile& p) {
  SiteExponents out;
  for (int site = p.first_site; site <= p.last_site(); ++site) {
    out.emplace_back(p.alpha_at(site), p.gamma_at(site));
  }
  while (!out.empty() && out.back() == std::pair<unsigned, unsigned>{0, 0}) out.pop_back();
  return out;
}

inline SiteExponents add_exponents(const SiteExponents& x, const SiteExponents& y) {
  SiteExponents out(std::max(x.size(), y.size()), {0, 0});
  for (std::size_t k = 0; k < x.size(); ++k) {
    out[k].first += x[k].first;
    out[k].second += x[k].second;
  }
  for (std::size_t k = 0; k < y.size(); ++k) {
    out[k].first += y[k].first;
    out[k].second += y[k].second;
  }
  return out;
}

// Motzkin paths of length r grouped by exponent profile, with multiplicities.
inline const std::map<SiteExponents, long>& motzkin_profiles(unsigned r) {
  auto& cache = moment_cache().motzkin_profiles;
  if (auto it = cache.find(r); it != cache.end()) return it->second;
  std::map<SiteExponents, long> groups;
  for (const auto& w : enumerate_motzkin(r)) ++groups[site_exponents(exponent_profile(w))];
  return cache.emplace(r, std::move(groups)).first->second;
}

// E[prod over sites] with level l at matrix site l + 1.
inline BivarPoly profile_expectation(const SiteExponents& e) {
  for (const auto& [a, g] : e)
    if (a % 2 == 1) return {};
  BivarPoly out = Rational(1);
  for (std::size_t l = 0; l < e.size(); ++l) {
    if (e[l].first == 0 && e[l].second == 0) continue;
    out *= entry_moment(static_cast<unsigned>(l + 1), e[l].first, e[l].second);
  }
  return out;
}

// u-degree <= total/2 and deg_beta(coefficient of u^k) <= k.
inline void check_moment_structure(const BivarPoly& p, unsigned total, const std::string& what) {
  for (const auto& [key, c] : p.terms()) {
    if (2 * key.first > total) {
      throw StructureViolation(what + ": u-degree " + std::to_string(key.first) +
                               " exceeds half the path length " + std::to_string(total));
    }
    if (key.second > key.first) {
      throw StructureViolation(what + ": beta-degree of the u^" + std::to_string(key.first) +
                               " coefficient exceeds " + std::to_string(key.first));
    }
  }
}

}  // namespace detail

// E[<mu_n, x^r>] = E[T^r(1,1)].
inline BivarPoly spectral_moment_expected(unsigned r) {
  auto& cache = detail::moment_cache().single;
  if (auto it = cache.find(r); it != cache.end()) return it->second;
  BivarPoly out;
  for (const auto& [profile, count] : detail::motzkin_profiles(r)) {
    out += detail::profile_expectation(profile) * Rational(count);
  }
  detail::check_moment_structure(out, r, "E<mu_n, x^" + std::to_string(r) + ">");
  if (r % 2 == 1 && !out.is_zero()) throw StructureViolation("odd spectral moment is nonzero");
  cache.emplace(r, out);
  return out;
}

// E[<mu_n, x^r><mu_n, x^s>]. Both factors read the same entries, so the
// per-site exponents of the two paths are added before taking expectations.
inline BivarPoly spectral_moment_product_expected(unsigned r, unsigned s) {
  if (r + s > kMaxPathLength) {
    throw std::invalid_argument("product moment order " + std::to_string(r + s) +
                                " exceeds the cap of " + std::to_string(kMaxPathLength));
  }
  if (r > s) std::swap(r, s);
  auto& cache = detail::moment_cache().product;
  if (auto it = cache.find({r, s}); it != cache.end()) return it->second;

  std::map<detail::SiteExponents, long> joint;
  const auto& left = detail::motzkin_profiles(r);
  const auto& right = detail::motzkin_profiles(s);
  for (const auto& [pl, cl] : left)
    for (const auto& [pr, cr] : right) joint[detail::add_exponents(pl, pr)] += cl * cr;

  BivarPoly out;
  for (const auto& [profile, count] : joint) {
    out += detail::profile_expectation(profile) * Rational(count);
  }
  detail::check_moment_structure(
      out, r + s, "E<mu_n, x^" + std::to_string(r) + "><mu_n, x^" + std::to_string(s) + ">");
  if ((r + s) % 2 == 1 && !out.is_zero()) throw StructureViolation("odd product moment is nonzero");
  cache.emplace(std::make_pair(r, s), out);
  return out;
}

// E[<L_n, x^r>]; equal to the spectral moment because E[q_j^2] = 1/n and the
// weights are independent of the eigenvalues.
inline BivarPoly empirical_moment_expected(unsigned r) { return spectral_moment_expected(r); }

// E[<mu_n, p>] = E[<L_n, p>].
inline BivarPoly expected_pairing(const Polynomial& p) {
  BivarPoly out;
  for (unsigned r = 0; r < p.coefficients().size(); ++r) {
    if (p.coeff(r) == 0) continue;
    out += spectral_moment_expected(r) * p.coeff(r);
  }
  return out;
}

namespace detail {

inline void require_variance_degree(const Polynomial& p) {
  if (2 * p.degree() > kMaxPathLength) {
    throw std::invalid_argument("variance needs 2 deg p <= " + std::to_string(kMaxPathLength));
  }
}

}  // namespace detail

// Var[<L_n, p>] = (1 + 2u) E[<mu,p>^2] - 2u E[<mu,p^2>] - E[<mu,p>]^2, checked
// to have the form sum_{k=2}^{m+1} beta l_k(beta) u^k with deg l_k <= k - 2.
inline BivarPoly variance_linear_stat(const Polynomial& p) {
  detail::require_variance_degree(p);
  const unsigned m = p.degree();
  if (m == 0) return {};

  BivarPoly second;  // E[<mu,p>^2]
  for (unsigned r = 0; r <= m; ++r) {
    for (unsigned s = 0; s <= m; ++s) {
      const Rational c = p.coeff(r) * p.coeff(s);
      if (c == 0) continue;
      second += spectral_moment_product_expected(r, s) * c;
    }
  }
  const BivarPoly square_pairing = expected_pairing(p * p);  // E[<mu,p^2>]
  const BivarPoly mean = expected_pairing(p);
  const BivarPoly u = BivarPoly::u();

  BivarPoly var = (Rational(1) + u * Rational(2)) * second - u * square_pairing * Rational(2) -
                  mean * mean;

  const std::string what = "Var<L_n, " + p.to_string() + ">";
  for (const auto& [key, c] : var.terms()) {
    if (key.first < 2) {
      throw StructureViolation(what + ": nonzero u^" + std::to_string(key.first) + " term");
    }
    if (key.first > m + 1) {
      throw StructureViolation(what + ": u-degree above m + 1");
    }
    if (key.second < 1) {
      throw StructureViolation(what + ": coefficient of u^" + std::to_string(key.first) +
                               " is not divisible by beta");
    }
    if (key.second - 1 > key.first - 2) {
      throw StructureViolation(what + ": deg l_" + std::to_string(key.first) + " exceeds " +
                               std::to_string(key.first - 2));
    }
  }
  return var;
}

// l_{p;k}(beta) for k = 0..m+1 (entries 0 and 1 are always zero).
inline std::vector<Polynomial> variance_coefficients(const Polynomial& p) {
  const BivarPoly var = variance_linear_stat(p);
  std::vector<Polynomial> out(p.degree() + 2);
  for (unsigned k = 2; k < out.size(); ++k) {
    std::vector<Rational> c;
    for (const auto& [key, v] : var.terms()) {
      if (key.first != k) continue;
      const unsigned j = key.second - 1;
      if (c.size() <= j) c.resize(j + 1, Rational(0));
      c[j] = v;
    }
    out[k] = Polynomial(std::move(c));
  }
  return out;
}

// Limit of n^2 beta Var[<L_n, p>] as n beta -> infinity: the constant l_{p;2}.
inline Rational sigma_p_sq(const Polynomial& p) {
  if (p.degree() == 0) return 0;
  const auto l = variance_coefficients(p);
  if (l[2].degree() > 0) {
    throw StructureViolation("l_2 of " + p.to_string() + " depends on beta");
  }
  return l[2].coeff(0);
}

// Limit of n^2 beta Var[<L_n, p>] as n beta -> 2 alpha:
// sum_{k=2}^{m+1} l_{p;k}(0) / (2 alpha)^(k-2).
inline Rational sigma_p_alpha_sq(const Polynomial& p, const Rational& alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (p.degree() == 0) return 0;
  const auto l = variance_coefficients(p);
  Rational out = 0;
  for (unsigned k = 2; k < l.size(); ++k) out += l[k].coeff(0) / pow(2 * alpha, k - 2);
  return out;
}

// Smallest n for which every Motzkin path of length `max_path_length` fits.
inline std::size_t min_valid_size(unsigned max_path_length) { return max_path_length / 2 + 1; }

// n^2 beta Var[<L_n, p>] at exact (n, beta).
inline Rational scaled_variance_at(const Polynomial& p, std::size_t n, const Rational& beta) {
  if (n < min_valid_size(2 * p.degree())) {
    throw std::invalid_argument("n = " + std::to_string(n) +
                                " is below the validity domain of the exact variance formula");
  }
  const Rational nn(static_cast<unsigned long>(n));
  const Rational u = 1 / (nn * beta);
  return nn * nn * beta * variance_linear_stat(p).evaluate(u, beta);
}

struct PoincarePoint {
  std::size_t n = 0;
  Rational beta;
  Rational lhs;  // n^2 beta Var[<L_n, p>]
  Rational rhs;  // 2 E[<L_n, (p')^2>]
  bool holds = false;
  Rational margin() const { return rhs - lhs; }
};

struct PoincareReport {
  Polynomial p;
  std::vector<PoincarePoint> points;
  bool all_hold() const {
    for (const auto& pt : points)
      if (!pt.holds) return false;
    return true;
  }
};

// Exact check of n^2 beta Var[<L_n, p>] <= 2 E[<L_n, (p')^2>] on a grid.
inline PoincareReport poincare_check(const Polynomial& p,
                                     const std::vector<std::pair<std::size_t, Rational>>& grid) {
  detail::require_variance_degree(p);
  const Polynomial dp = p.derivative();
  const BivarPoly rhs_poly = expected_pairing(dp * dp) * Rational(2);
  PoincareReport report{p, {}};
  for (const auto& [n, beta] : grid) {
    if (!(beta > 0)) throw std::invalid_argument("poincare_check: beta must be positive");
    PoincarePoint pt;
    pt.n = n;
    pt.beta = beta;
    pt.lhs = scaled_variance_at(p, n, beta);
    const Rational u = 1 / (Rational(static_cast<unsigned long>(n)) * beta);
    pt.rhs = rhs_poly.evaluate(u, beta);
    pt.holds = pt.lhs <= pt.rhs;
    report.points.push_back(std::move(pt));
  }
  return report;
}

}  // namespace gbelab
