#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gbelab/randsrc.hpp"
#include "gbelab/tridiag_eig.hpp"
#include "gbelab/tridiagonal.hpp"

namespace gbelab {

// Sampled G-beta-E matrix: a_i = sqrt(2/(n beta)) N(0,1) and
// b_i = sqrt(2/(n beta)) chi~_{(n-i) beta}, all independent.
inline TridiagonalMatrix build_gbe(std::size_t n, double beta, RngStream& stream) {
  if (n == 0) throw std::invalid_argument("build_gbe: n must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("build_gbe: beta must be > 0");
  TridiagonalMatrix t;
  t.beta = beta;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  const double nb = static_cast<double>(n) * beta;
  const double scale = std::sqrt(2.0 / nb);
  for (auto& a : t.diag) a = scale * sample_gaussian(stream);
  for (std::size_t i = 1; i < n; ++i) {
    const double k = static_cast<double>(n - i) * beta;
    t.offdiag[i - 1] = scale * sample_chi_tilde(k, stream);
  }
  return t;
}

inline TridiagonalMatrix free_jacobi(std::size_t n) {
  if (n == 0) throw std::invalid_argument("free_jacobi: n must be >= 1");
  TridiagonalMatrix t;
  t.diag.assign(n, 0.0);
  t.offdiag.assign(n - 1, 1.0);
  t.deterministic = true;
  return t;
}

// Top-left n x n block of the limiting matrix for n beta -> 2 alpha:
// a_i = N(0,1)/sqrt(alpha), b_i = chi~_{2 alpha}/sqrt(alpha), i.i.d.
inline TridiagonalMatrix build_j_alpha_truncation(std::size_t n, double alpha, RngStream& stream) {
  if (n == 0) throw std::invalid_argument("build_j_alpha_truncation: n must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("build_j_alpha_truncation: alpha must be > 0");
  TridiagonalMatrix t;
  t.alpha = alpha;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  const double scale = 1.0 / std::sqrt(alpha);
  for (auto& a : t.diag) a = scale * sample_gaussian(stream);
  for (auto& b : t.offdiag) b = scale * sample_chi_tilde(2.0 * alpha, stream);
  return t;
}

struct SpectralMeta {
  std::size_t n = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Eigenvalues with optional spectral-measure weights q_j^2 = |v_j(1)|^2.
// Without weights the sample represents the empirical distribution L_n.
struct SpectralSample {
  std::vector<double> eigenvalues;
  std::optional<std::vector<double>> weights;
  SpectralMeta meta;

  // <measure, f>: weighted by q_j^2 when present, uniform 1/n otherwise.
  template <class F>
  double pair(F&& f) const {
    const std::size_t n = eigenvalues.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights ? (*weights)[j] : 1.0 / static_cast<double>(n);
      sum += w * f(eigenvalues[j]);
    }
    return sum;
  }
};

// For G-beta-E the weights are Dirichlet(beta/2, ..., beta/2) and independent
// of the eigenvalues, so they are drawn directly instead of computing
// eigenvectors.
inline SpectralSample spectral_sample(const TridiagonalMatrix& t, bool with_weights,
                                      RngStream& stream) {
  SpectralSample s;
  s.eigenvalues = eigenvalues(t).values;
  s.meta = SpectralMeta{t.size(), t.beta, stream.seed(), stream.stream_id()};
  if (with_weights) {
    if (!(t.beta > 0.0)) {
      throw std::invalid_argument("spectral_sample: weights need a sampled G-beta-E matrix");
    }
    s.weights = sample_dirichlet(t.size(), t.beta / 2.0, stream);
  }
  return s;
}

}  // namespace gbelab
