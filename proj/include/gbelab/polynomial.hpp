#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbelab/rational.hpp"

namespace gbelab {

// Univariate polynomial c_0 + c_1 x + ... + c_m x^m with exact rational
// coefficients, kept trimmed so that the leading coefficient is nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(unsigned degree, Rational coeff = 1) {
    std::vector<Rational> c(degree + 1, Rational(0));
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }
  static Polynomial constant(Rational value) { return Polynomial({std::move(value)}); }

  // "0,0,1" -> x^2 ; entries may be rationals ("1/2") or decimals.
  static Polynomial parse_coefficients(const std::string& text) {
    std::vector<Rational> c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto lo = item.find_first_not_of(" \t");
      const auto hi = item.find_last_not_of(" \t");
      if (lo == std::string::npos) throw std::invalid_argument("empty polynomial coefficient");
      c.push_back(parse_rational(item.substr(lo, hi - lo + 1)));
    }
    if (c.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as 0.
  unsigned degree() const { return c_.empty() ? 0 : static_cast<unsigned>(c_.size() - 1); }
  Rational coeff(unsigned k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const std::vector<Rational>& coefficients() const { return c_; }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
    return Polynomial(std::move(d));
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
  }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<Rational> c(std::max(p.c_.size(), q.c_.size()), Rational(0));
    for (std::size_t k = 0; k < p.c_.size(); ++k) c[k] += p.c_[k];
    for (std::size_t k = 0; k < q.c_.size(); ++k) c[k] += q.c_[k];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<Rational> c(p.c_.size() + q.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.c_ == q.c_; }

  std::string to_string(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      Rational mag = abs(c_[k]);
      const bool neg = c_[k] < 0;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
      if (k == 0 || mag != 1) {
        out += mag.get_str();
        if (!mono.empty()) out += "*";
      }
      out += mono;
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

}  // namespace gbelab
