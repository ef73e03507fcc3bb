#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbelab {

// Symmetric tridiagonal matrix with 1-based mathematical indexing exposed via
// a(i) and b(i): a(i) = T(i, i), b(i) = T(i, i + 1).
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;
  double beta = 0.0;
  // Reference matrices (free Jacobi) carry no beta; J_alpha truncations carry
  // alpha instead.
  bool deterministic = false;
  double alpha = 0.0;

  std::size_t size() const { return diag.size(); }

  double a(std::size_t i) const { return diag[i - 1]; }
  double b(std::size_t i) const { return offdiag[i - 1]; }

  // Entry T(i, j), 1-based; zero outside the band.
  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i - 1];
    if (j == i + 1) return offdiag[i - 1];
    if (i == j + 1) return offdiag[j - 1];
    return 0.0;
  }

  // Largest absolute row sum; bounds the spectral radius.
  double norm_inf() const {
    const std::size_t n = size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = std::abs(diag[i]);
      if (i > 0) row += std::abs(offdiag[i - 1]);
      if (i + 1 < n) row += std::abs(offdiag[i]);
      best = std::max(best, row);
    }
    return best;
  }

  void validate() const {
    if (diag.empty()) throw std::invalid_argument("tridiagonal matrix must have n >= 1");
    if (offdiag.size() + 1 != diag.size()) {
      throw std::invalid_argument("offdiag length must be n - 1");
    }
    for (double x : offdiag) {
      if (!(x >= 0.0)) throw std::invalid_argument("offdiag entries must be nonnegative");
    }
  }
};

namespace detail {
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace detail

// Debug dump: "n beta", then the diagonal, then the off-diagonal, 17 significant digits.
inline std::string dump_matrix(const TridiagonalMatrix& t) {
  std::string out = std::to_string(t.size()) + " " + detail::format_g17(t.beta) + "\n";
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    if (i) out += ' ';
    out += detail::format_g17(t.diag[i]);
  }
  out += '\n';
  for (std::size_t i = 0; i < t.offdiag.size(); ++i) {
    if (i) out += ' ';
    out += detail::format_g17(t.offdiag[i]);
  }
  out += '\n';
  return out;
}

inline TridiagonalMatrix parse_matrix_dump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  TridiagonalMatrix t;
  std::size_t n = 0;
  if (!std::getline(in, line)) throw std::invalid_argument("matrix dump: missing header");
  {
    std::istringstream head(line);
    if (!(head >> n >> t.beta) || n == 0) throw std::invalid_argument("matrix dump: bad header");
  }
  auto read_row = [&](std::vector<double>& row, std::size_t expected) {
    std::getline(in, line);
    std::istringstream rs(line);
    double x;
    while (rs >> x) row.push_back(x);
    if (row.size() != expected) throw std::invalid_argument("matrix dump: wrong row length");
  };
  read_row(t.diag, n);
  read_row(t.offdiag, n - 1);
  t.deterministic = t.beta == 0.0;
  t.validate();
  return t;
}

}  // namespace gbelab
