#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gbelab {

// Arbitrary-precision rational. Rising factorials and path sums overflow
// 64-bit integers long before r = 16.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "3", "-3/4", "0.05", "1e-3". Decimal input is converted exactly.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational q;
    if (q.set_str(text, 10) != 0) {
      throw std::invalid_argument("bad rational literal: " + text);
    }
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }
  // Decimal with optional exponent.
  std::string mantissa = text;
  long exponent = 0;
  const auto epos = text.find_first_of("eE");
  if (epos != std::string::npos) {
    mantissa = text.substr(0, epos);
    try {
      exponent = std::stol(text.substr(epos + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in literal: " + text);
    }
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    const char c = mantissa[i];
    if ((c == '-' || c == '+') && i == 0) {
      if (c == '-') digits.push_back('-');
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument("bad rational literal: " + text);
    }
  }
  if (digits.empty() || digits == "-") throw std::invalid_argument("bad rational literal: " + text);
  mpz_class num(digits, 10);
  mpz_class ten_pow;
  const long shift = exponent - frac_digits;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact conversion of a finite double.
inline Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  Rational q(x);
  q.canonicalize();
  return q;
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace gbelab
