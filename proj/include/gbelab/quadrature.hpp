#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbelab {

class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order on [-1, 1]; Newton iteration on
// P_order started from the Chebyshev-like guesses cos(pi (i - 1/4)/(order + 1/2)).
inline QuadratureRule gauss_legendre(std::size_t order) {
  if (order == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const std::size_t half = (order + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(order) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(order) * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> kronrod_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T kronrod = f(center) * kKronrodWeights[7];
  T gauss = f(center) * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kKronrodWeights[i];
    if (i % 2 == 1) gauss += sum * kGaussWeights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration; the panel with the
// largest error estimate is bisected until the summed estimate is below
// abs_tol. T may be double or std::complex<double>.
template <class T, class F>
T integrate_adaptive(F&& f, double a, double b, double abs_tol, std::size_t max_panels = 4000) {
  std::priority_queue<detail::Panel<T>> heap;
  heap.push(detail::kronrod_panel<T>(f, a, b));
  double total_error = heap.top().error;
  while (total_error > abs_tol) {
    if (heap.size() >= max_panels) {
      throw AccuracyError("adaptive quadrature stalled on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] with error estimate " +
                          std::to_string(total_error));
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod_panel<T>(f, worst.a, mid);
    auto right = detail::kronrod_panel<T>(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // Recompute occasionally to shed accumulated cancellation in the running sum.
    if (heap.size() % 64 == 0) {
      auto copy = heap;
      total_error = 0.0;
      while (!copy.empty()) {
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  T sum{};
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace gbelab
