#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gbelab/rational.hpp"

namespace gbelab {

// Reproducible random stream keyed by (seed, stream_id). Each replicate of an
// experiment owns one stream; the key is mixed through a seed sequence so that
// neighbouring ids give unrelated engine states.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  // Marsaglia polar method; the second variate of each pair is cached.
  double gaussian() {
    if (spare_) {
      const double out = *spare_;
      spare_.reset();
      return out;
    }
    double x, y, s;
    do {
      x = 2.0 * uniform() - 1.0;
      y = 2.0 * uniform() - 1.0;
      s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = y * scale;
    return x * scale;
  }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct GammaParams {
  double shape = 1.0;  // scale is fixed to 1
};

inline double sample_gaussian(RngStream& stream) { return stream.gaussian(); }

namespace detail {

// Marsaglia-Tsang squeeze/rejection, valid for shape >= 1.
inline double gamma_marsaglia_tsang(double shape, RngStream& stream) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace detail

// log of a Gamma(shape, 1) variate. For shape < 1 the boosting identity
// Gamma(a) = Gamma(a + 1) * U^(1/a) is applied in log space, so tiny shapes
// (beta/2 with beta -> 0) do not lose the sample to underflow.
inline double sample_log_gamma(GammaParams p, RngStream& stream) {
  if (!(p.shape > 0.0) || !std::isfinite(p.shape)) {
    throw std::invalid_argument("gamma shape must be positive and finite");
  }
  if (p.shape >= 1.0) return std::log(detail::gamma_marsaglia_tsang(p.shape, stream));
  const double boosted = detail::gamma_marsaglia_tsang(p.shape + 1.0, stream);
  return std::log(boosted) + std::log(stream.uniform()) / p.shape;
}

// Gamma(shape, 1). May return 0 when shape is so small that the variate
// underflows double precision.
inline double sample_gamma(GammaParams p, RngStream& stream) {
  if (!(p.shape > 0.0) || !std::isfinite(p.shape)) {
    throw std::invalid_argument("gamma shape must be positive and finite");
  }
  if (p.shape >= 1.0) return detail::gamma_marsaglia_tsang(p.shape, stream);
  return std::exp(sample_log_gamma(p, stream));
}

// Square root of a Gamma(k/2, 1) variate.
inline double sample_chi_tilde(double k, RngStream& stream) {
  if (!(k > 0.0)) throw std::invalid_argument("chi-tilde parameter must be positive");
  return std::sqrt(sample_gamma(GammaParams{k / 2.0}, stream));
}

// Dirichlet(conc, ..., conc) weights of length n as normalized gamma draws.
inline std::vector<double> sample_dirichlet(std::size_t n, double conc, RngStream& stream) {
  if (n == 0) throw std::invalid_argument("dirichlet dimension must be positive");
  if (!(conc > 0.0)) throw std::invalid_argument("dirichlet concentration must be positive");
  std::vector<double> logs(n);
  for (auto& l : logs) l = sample_log_gamma(GammaParams{conc}, stream);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = std::exp(logs[j] - top);
    total += w[j];
  }
  for (auto& x : w) x /= total;
  return w;
}

// E[X^k] for X ~ Gamma(shape, 1): the rising factorial shape (shape+1) ... (shape+k-1).
inline Rational gamma_moment_exact(const Rational& shape, unsigned k) {
  Rational out = 1;
  for (unsigned t = 0; t < k; ++t) out *= shape + t;
  return out;
}

// E[Z^r] for Z ~ N(0, 1): zero for odd r, (r-1)!! otherwise.
inline Rational gaussian_moment_exact(unsigned r) {
  if (r % 2 == 1) return 0;
  Rational out = 1;
  for (unsigned t = r; t > 1; t -= 2) out *= t - 1;
  return out;
}

}  // namespace gbelab
