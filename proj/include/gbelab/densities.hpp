#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbelab/quadrature.hpp"
#include "gbelab/rational.hpp"

namespace gbelab {

// ---------------------------------------------------------------------------
// Semicircle law on [-2, 2]

inline double semicircle_pdf(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

inline double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
         std::asin(x / 2.0) / std::numbers::pi;
}

// Zero for odd r, Catalan number C_{r/2} for even r.
inline Rational semicircle_moment(unsigned r) {
  if (r % 2 == 1) return 0;
  const unsigned q = r / 2;
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * q, q);
  Rational out(binom, mpz_class(q + 1));
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Limit density for n beta -> 2 alpha

namespace detail {

inline constexpr double kFhatTolerance = 1e-12;

// Integrates over [lo, hi] in unit-length pieces; the pieces keep the
// oscillating factor resolved from the first bisection.
template <class F>
std::complex<double> integrate_pieces(F&& f, double lo, double hi) {
  std::complex<double> total{};
  const int pieces = std::max(1, static_cast<int>(std::ceil(hi - lo)));
  const double width = (hi - lo) / pieces;
  for (int k = 0; k < pieces; ++k) {
    total += integrate_adaptive<std::complex<double>>(f, lo + k * width, lo + (k + 1) * width,
                                                      kFhatTolerance / pieces);
  }
  return total;
}

}  // namespace detail

// f^_alpha(x) = sqrt(alpha / Gamma(alpha)) int_0^inf t^(alpha-1) e^(-t^2/2 + i x t) dt.
//
// alpha <= 1: integrated along the real axis after t = s^(1/alpha), which
// removes the t^(alpha-1) endpoint singularity. The range is cut where the
// integrand drops below 1e-16 of its peak.
//
// alpha > 1: on the real axis the result can be e^(-x^2/4) smaller than the
// integrand, so the contour is moved through the saddle t* of
// phi(t) = (alpha-1) log t - t^2/2 + i x t: first the segment 0 -> t*, then the
// horizontal line t* + s, s >= 0. |e^phi| is largest at t* on both pieces and
// the integrand is divided by that value.
inline std::complex<double> f_hat_alpha(double alpha, double x) {
  if (!(alpha > 0.0)) throw std::invalid_argument("f_hat_alpha: alpha must be positive");
  const double log_norm = 0.5 * (std::log(alpha) - std::lgamma(alpha));
  const double log_cut = std::log(1e-16);

  if (alpha <= 1.0) {
    auto log_mod = [alpha](double t) { return (alpha - 1.0) * std::log(t) - 0.5 * t * t; };
    double t_max = 1.0;
    while (log_mod(t_max) > log_cut) t_max += 0.25;
    const double inv = 1.0 / alpha;
    auto g = [&](double s) {
      const double t = std::pow(s, inv);
      return std::polar(std::exp(-0.5 * t * t) * inv, x * t);
    };
    return std::exp(log_norm) * detail::integrate_pieces(g, 0.0, std::pow(t_max, alpha));
  }

  if (x < 0.0) return std::conj(f_hat_alpha(alpha, -x));
  using C = std::complex<double>;
  const double a = alpha - 1.0;
  const double disc = 4.0 * a - x * x;
  const C saddle = disc > 0.0 ? C(0.5 * std::sqrt(disc), 0.5 * x)
                              : C(0.0, 0.5 * (x + std::sqrt(-disc)));
  auto phi = [a, x](C t) { return a * std::log(t) - 0.5 * t * t + C(0.0, x) * t; };
  // past the edge the segment also crosses the lower saddle, a maximum along it
  double log_peak = phi(saddle).real();
  if (disc <= 0.0) log_peak = std::max(log_peak, phi(C(0.0, 0.5 * (x - std::sqrt(-disc)))).real());

  const double radius = std::abs(saddle);
  const C dir = saddle / radius;
  auto on_ray = [&](double r) {
    return r == 0.0 ? C{} : std::exp(phi(r * dir) - log_peak) * dir;
  };
  auto on_line = [&](double s) { return std::exp(phi(saddle + s) - log_peak); };
  double s_max = 1.0;
  while (phi(saddle + s_max).real() - log_peak > log_cut) s_max += 0.25;

  const C integral =
      detail::integrate_pieces(on_ray, 0.0, radius) + detail::integrate_pieces(on_line, 0.0, s_max);
  return std::exp(log_norm + log_peak) * integral;
}

// nu_alpha(x) = sqrt(alpha) mubar_alpha(sqrt(alpha) x),
// mubar_alpha(y) = exp(-y^2/2) / sqrt(2 pi) / |f^_alpha(y)|^2.
inline double nu_alpha_pdf(double alpha, double x) {
  const double y = std::sqrt(alpha) * x;
  const double mod2 = std::norm(f_hat_alpha(alpha, y));
  return std::sqrt(alpha) * std::exp(-0.5 * y * y) /
         (std::sqrt(2.0 * std::numbers::pi) * mod2);
}

struct DensityGrid {
  std::vector<double> points;
  std::vector<double> values;
  double total_mass = 0.0;

  // Trapezoid rule for int x^r density(x) dx over the grid.
  double moment(unsigned r) const {
    double sum = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double h = points[i] - points[i - 1];
      sum += 0.5 * h *
             (std::pow(points[i - 1], r) * values[i - 1] + std::pow(points[i], r) * values[i]);
    }
    return sum;
  }

  void write_csv(std::ostream& out) const {
    out << "x,density\n";
    char buf[80];
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", points[i], values[i]);
      out << buf;
    }
  }
};

inline constexpr std::size_t kDefaultGridPoints = 2001;

inline double default_grid_half_width(double alpha) {
  return std::max(2.5, 6.0 / std::sqrt(alpha) + 1.0);
}

template <class F>
DensityGrid make_density_grid(F&& pdf, double half_width, std::size_t points) {
  if (points < 2) throw std::invalid_argument("density grid needs at least two points");
  DensityGrid g;
  g.points.resize(points);
  g.values.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    g.points[i] = -half_width + 2.0 * half_width * static_cast<double>(i) /
                                    static_cast<double>(points - 1);
    g.values[i] = pdf(g.points[i]);
  }
  g.total_mass = g.moment(0);
  return g;
}

inline DensityGrid nu_alpha_grid(double alpha, std::size_t points = kDefaultGridPoints,
                                 double half_width = 0.0) {
  if (half_width <= 0.0) half_width = default_grid_half_width(alpha);
  return make_density_grid([alpha](double x) { return nu_alpha_pdf(alpha, x); }, half_width,
                           points);
}

inline DensityGrid semicircle_grid(std::size_t points = kDefaultGridPoints,
                                   double half_width = 2.5) {
  return make_density_grid(semicircle_pdf, half_width, points);
}

// ---------------------------------------------------------------------------
// Limit variance functional
//   sigma_f^2 = 1/(2 pi^2) int int D(x,y)^2 (4 - xy) / (sqrt(4-x^2) sqrt(4-y^2)) dx dy
// with D the difference quotient of f. Under x = 2 cos(theta), y = 2 cos(phi)
// the weight becomes dtheta dphi over [0, pi]^2.

struct SigmaQuadratureOptions {
  std::size_t order = 20;         // Gauss-Legendre points per panel
  std::size_t max_panels = 256;   // per axis
  double tolerance = 1e-11;       // change between successive panel doublings
};

template <class F, class FPrime>
double sigma_f_sq_quadrature(F&& f, FPrime&& f_prime, SigmaQuadratureOptions opts = {}) {
  const QuadratureRule base = gauss_legendre(opts.order);
  auto evaluate = [&](std::size_t panels) {
    const double width = std::numbers::pi / static_cast<double>(panels);
    std::vector<double> xs, ws, fx;
    for (std::size_t p = 0; p < panels; ++p) {
      for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        const double theta = width * (static_cast<double>(p) + 0.5 * (base.nodes[i] + 1.0));
        xs.push_back(2.0 * std::cos(theta));
        ws.push_back(0.5 * width * base.weights[i]);
      }
    }
    fx.reserve(xs.size());
    for (double x : xs) fx.push_back(f(x));
    const std::size_t m = xs.size();
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double dxy = xs[i] - xs[j];
        const double d =
            std::abs(dxy) < 4e-8 ? f_prime(0.5 * (xs[i] + xs[j])) : (fx[i] - fx[j]) / dxy;
        row += ws[j] * d * d * (4.0 - xs[i] * xs[j]);
      }
      total += ws[i] * row;
    }
    return total / (2.0 * std::numbers::pi * std::numbers::pi);
  };

  double previous = evaluate(1);
  for (std::size_t panels = 2; panels <= opts.max_panels; panels *= 2) {
    const double current = evaluate(panels);
    if (std::abs(current - previous) <= opts.tolerance * std::max(1.0, std::abs(current))) {
      return current;
    }
    previous = current;
  }
  throw AccuracyError("sigma_f_sq_quadrature did not settle within the panel cap");
}

}  // namespace gbelab
