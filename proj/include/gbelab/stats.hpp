#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "gbelab/densities.hpp"

namespace gbelab {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline constexpr std::size_t kMinKsSamples = 100;

namespace detail {

// sup_x |F_emp(x) - F(x)| for a continuous model CDF F.
template <class Cdf>
double ks_distance(std::vector<double> sorted, Cdf&& cdf) {
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double model = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - model;
    const double below = model - static_cast<double>(i) / n;
    best = std::max({best, above, below});
  }
  return best;
}

}  // namespace detail

// KS distance between the empirical CDF of already-standardized samples and
// the standard normal CDF.
inline double ks_distance_to_normal(std::span<const double> samples) {
  if (samples.size() < kMinKsSamples) {
    throw std::invalid_argument("ks_distance_to_normal needs at least 100 samples");
  }
  return detail::ks_distance(std::vector<double>(samples.begin(), samples.end()), normal_cdf);
}

// KS distance between the eigenvalue empirical CDF and the semicircle CDF.
inline double semicircle_ks(std::span<const double> eigenvalues) {
  if (eigenvalues.size() < 10) throw std::invalid_argument("semicircle_ks needs n >= 10");
  return detail::ks_distance(std::vector<double>(eigenvalues.begin(), eigenvalues.end()),
                             semicircle_cdf);
}

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double fourth_central = 0.0;  // population fourth central moment

  // Approximate standard error of the sample variance.
  double variance_standard_error() const {
    const double m2 = variance * (count - 1.0) / count;
    return std::sqrt(std::max(fourth_central - m2 * m2, 0.0) / static_cast<double>(count));
  }
  double mean_standard_error() const { return std::sqrt(variance / static_cast<double>(count)); }
};

inline SampleSummary summarize(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("summarize needs at least two samples");
  SampleSummary s;
  s.count = x.size();
  const auto n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.variance = m2 * n / (n - 1.0);
  s.fourth_central = m4;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

// Samples shifted and scaled to zero mean and unit variance.
inline std::vector<double> standardize(std::span<const double> x) {
  const auto s = summarize(x);
  const double sd = std::sqrt(s.variance);
  std::vector<double> out(x.begin(), x.end());
  for (auto& v : out) v = sd > 0.0 ? (v - s.mean) / sd : 0.0;
  return out;
}

}  // namespace gbelab
