#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "gbelab/polynomial.hpp"
#include "gbelab/rational.hpp"

namespace gbelab {

// Exact polynomial in u := 1/(n beta) and beta. Keys are (power of u, power of
// beta); zero coefficients are never stored.
class BivarPoly {
 public:
  using Key = std::pair<unsigned, unsigned>;

  BivarPoly() = default;
  BivarPoly(const Rational& c) { add_term(0, 0, c); }  // NOLINT: constants convert implicitly

  static BivarPoly u() { return term(1, 0, 1); }
  static BivarPoly beta() { return term(0, 1, 1); }
  static BivarPoly term(unsigned u_pow, unsigned beta_pow, const Rational& c) {
    BivarPoly p;
    p.add_term(u_pow, beta_pow, c);
    return p;
  }

  void add_term(unsigned u_pow, unsigned beta_pow, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(Key{u_pow, beta_pow}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(unsigned u_pow, unsigned beta_pow) const {
    auto it = terms_.find(Key{u_pow, beta_pow});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  unsigned u_degree() const {
    unsigned d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first);
    return d;
  }

  // Coefficient of u^k as a polynomial in beta.
  Polynomial u_coefficient(unsigned k) const {
    std::vector<Rational> c;
    for (const auto& [key, v] : terms_) {
      if (key.first != k) continue;
      if (c.size() <= key.second) c.resize(key.second + 1, Rational(0));
      c[key.second] = v;
    }
    return Polynomial(std::move(c));
  }

  // Lowest power of beta present in the coefficient of u^k (0 if that coefficient is zero).
  unsigned min_beta_power(unsigned k) const {
    unsigned best = ~0u;
    for (const auto& [key, v] : terms_)
      if (key.first == k) best = std::min(best, key.second);
    return best == ~0u ? 0 : best;
  }

  Rational evaluate(const Rational& u_val, const Rational& beta_val) const {
    Rational out = 0;
    for (const auto& [key, c] : terms_) out += c * pow(u_val, key.first) * pow(beta_val, key.second);
    return out;
  }

  // Final numeric substitution; coefficients are rounded only here.
  double evaluate(double u_val, double beta_val) const {
    double out = 0.0;
    for (const auto& [key, c] : terms_) {
      out += c.get_d() * std::pow(u_val, key.first) * std::pow(beta_val, key.second);
    }
    return out;
  }

  BivarPoly& operator+=(const BivarPoly& o) {
    for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
    return *this;
  }
  BivarPoly& operator-=(const BivarPoly& o) {
    for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
    return *this;
  }
  BivarPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [key, c] : terms_) c *= s;
    return *this;
  }

  friend BivarPoly operator+(BivarPoly p, const BivarPoly& q) { return p += q; }
  friend BivarPoly operator-(BivarPoly p, const BivarPoly& q) { return p -= q; }
  friend BivarPoly operator*(BivarPoly p, const Rational& s) { return p *= s; }
  friend BivarPoly operator*(const Rational& s, BivarPoly p) { return p *= s; }
  friend BivarPoly operator*(const BivarPoly& p, const BivarPoly& q) {
    BivarPoly out;
    for (const auto& [kp, cp] : p.terms_)
      for (const auto& [kq, cq] : q.terms_)
        out.add_term(kp.first + kq.first, kp.second + kq.second, cp * cq);
    return out;
  }
  BivarPoly& operator*=(const BivarPoly& o) { return *this = *this * o; }

  friend bool operator==(const BivarPoly& p, const BivarPoly& q) { return p.terms_ == q.terms_; }

  // Terms grouped by power of u (ascending), beta written as "b":
  // "1 + (2 - b)*u", "4*b*u^2 + (8*b - 4*b^2)*u^3".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    auto it = terms_.begin();
    while (it != terms_.end()) {
      const unsigned k = it->first.first;
      std::vector<Rational> coeffs;
      for (; it != terms_.end() && it->first.first == k; ++it) {
        if (coeffs.size() <= it->first.second) coeffs.resize(it->first.second + 1, Rational(0));
        coeffs[it->first.second] = it->second;
      }
      const Polynomial beta_part(std::move(coeffs));
      std::size_t nonzero = 0;
      for (const auto& c : beta_part.coefficients()) nonzero += c != 0;
      const std::string u_part = k == 0 ? "" : (k == 1 ? "u" : "u^" + std::to_string(k));

      std::string group;
      if (u_part.empty()) {
        group = beta_part.to_string("b");
      } else if (nonzero == 1) {
        const std::string mono = beta_part.to_string("b");
        if (mono == "1") {
          group = u_part;
        } else if (mono == "-1") {
          group = "-" + u_part;
        } else {
          group = mono + "*" + u_part;
        }
      } else {
        group = "(" + beta_part.to_string("b") + ")*" + u_part;
      }

      if (out.empty()) {
        out = group;
      } else if (group.front() == '-') {
        out += " - " + group.substr(1);
      } else {
        out += " + " + group;
      }
    }
    return out;
  }

 private:
  std::map<Key, Rational> terms_;
};

}  // namespace gbelab
