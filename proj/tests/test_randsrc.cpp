#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gbelab/randsrc.hpp"
#include "gbelab/stats.hpp"

using namespace gbelab;

namespace {

// |mean - target| within k standard errors.
void expect_mean_near(const std::vector<double>& x, double target, double k = 5.0) {
  const auto s = summarize(x);
  EXPECT_LE(std::abs(s.mean - target), k * s.mean_standard_error())
      << "mean " << s.mean << " target " << target;
}

std::vector<double> powers(const std::vector<double>& x, int r) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::pow(x[i], r);
  return out;
}

}  // namespace

TEST(RngStream, SameKeyReproducesSequence) {
  RngStream a(1, 0), b(1, 0);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
  RngStream c(1, 0), d(1, 0);
  for (int i = 0; i < 1001; ++i) ASSERT_EQ(sample_gaussian(c), sample_gaussian(d));
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(1, 0), b(1, 1), c(2, 0);
  EXPECT_NE(a.next_u64(), b.next_u64());
  EXPECT_NE(RngStream(1, 0).next_u64(), c.next_u64());
}

TEST(RngStream, NeighbouringStreamsUncorrelated) {
  constexpr int kDraws = 100000;
  for (std::uint64_t id = 0; id < 4; ++id) {
    RngStream a(7, id), b(7, id + 1);
    double sxy = 0.0;
    for (int i = 0; i < kDraws; ++i) sxy += a.gaussian() * b.gaussian();
    // correlation estimate has standard error 1/sqrt(N)
    EXPECT_LT(std::abs(sxy / kDraws), 5.0 / std::sqrt(kDraws));
  }
}

TEST(RngStream, UniformStaysInOpenUnitInterval) {
  RngStream s(3, 3);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SampleGaussian, MomentsOverMillionDraws) {
  RngStream s(1, 0);
  std::vector<double> x(1000000);
  for (auto& v : x) v = sample_gaussian(s);
  expect_mean_near(x, 0.0);
  expect_mean_near(powers(x, 2), 1.0);
  expect_mean_near(powers(x, 4), 3.0);
}

TEST(SampleGamma, RejectsNonPositiveShape) {
  RngStream s(1, 0);
  EXPECT_THROW(sample_gamma(GammaParams{0.0}, s), std::invalid_argument);
  EXPECT_THROW(sample_gamma(GammaParams{-1.0}, s), std::invalid_argument);
}

TEST(SampleGamma, ShapeTwoMeanAndVariance) {
  RngStream s(11, 0);
  std::vector<double> x(1000000);
  for (auto& v : x) v = sample_gamma(GammaParams{2.0}, s);
  expect_mean_near(x, 2.0);
  const auto sum = summarize(x);
  EXPECT_LE(std::abs(sum.variance - 2.0), 5.0 * sum.variance_standard_error());
}

TEST(SampleGamma, SmallShapeMean) {
  RngStream s(12, 0);
  std::vector<double> x(1000000);
  for (auto& v : x) v = sample_gamma(GammaParams{0.25}, s);
  expect_mean_near(x, 0.25);
}

TEST(SampleGamma, ShapeOneIsExponential) {
  RngStream s(13, 0);
  std::vector<double> x(100000);
  for (auto& v : x) v = sample_gamma(GammaParams{1.0}, s);
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 1.0 - std::exp(-x[i]);
    ks = std::max({ks, (i + 1) / n - f, f - i / n});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(SampleGamma, MonteCarloMomentsMatchExact) {
  for (double shape : {0.25, 0.5, 1.0, 2.0, 10.0}) {
    RngStream s(17, static_cast<std::uint64_t>(shape * 100));
    std::vector<double> x(200000);
    for (auto& v : x) v = sample_gamma(GammaParams{shape}, s);
    for (unsigned k = 1; k <= 4; ++k) {
      const double exact = gamma_moment_exact(from_double(shape), k).get_d();
      const auto xk = powers(x, static_cast<int>(k));
      const auto sum = summarize(xk);
      EXPECT_LE(std::abs(sum.mean - exact), 5.0 * sum.mean_standard_error())
          << "shape " << shape << " k " << k;
    }
  }
}

TEST(SampleGamma, TinyShapeStaysFiniteInLogSpace) {
  RngStream s(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const double l = sample_log_gamma(GammaParams{1e-4}, s);
    ASSERT_TRUE(std::isfinite(l));
  }
}

TEST(SampleChiTilde, SquareHasGammaMean) {
  RngStream s(21, 0);
  for (double k : {0.5, 3.0, 40.0}) {
    std::vector<double> x(200000);
    for (auto& v : x) {
      const double c = sample_chi_tilde(k, s);
      v = c * c;
    }
    expect_mean_near(x, k / 2.0);
  }
}

TEST(SampleChiTilde, LargeParameterConcentrates) {
  RngStream s(22, 0);
  const double k = 1e6;
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(sample_chi_tilde(k, s) / std::sqrt(k / 2.0), 1.0, 0.01);
  }
}

TEST(SampleChiTilde, RejectsNonPositive) {
  RngStream s(1, 0);
  EXPECT_THROW(sample_chi_tilde(0.0, s), std::invalid_argument);
  RngStream a(4, 4), b(4, 4);
  EXPECT_EQ(sample_chi_tilde(3.0, a), sample_chi_tilde(3.0, b));
}

TEST(SampleDirichlet, NormalizedAndValidated) {
  RngStream s(31, 0);
  for (double conc : {0.01, 0.5, 2.0}) {
    const auto w = sample_dirichlet(25, conc, s);
    double total = 0.0;
    for (double v : w) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_THROW(sample_dirichlet(0, 1.0, s), std::invalid_argument);
  EXPECT_THROW(sample_dirichlet(3, 0.0, s), std::invalid_argument);
}

TEST(SampleDirichlet, FirstAndSecondMoments) {
  // n = 4, conc = beta/2 = 1: E[q^2] = 1/4, E[q^4] = (beta+2)/(n(n beta+2)) = 1/10.
  RngStream s(32, 0);
  std::vector<double> w1(100000), w2(100000);
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const auto w = sample_dirichlet(4, 1.0, s);
    w1[i] = w[0];
    w2[i] = w[0] * w[0];
  }
  expect_mean_near(w1, 0.25);
  const double beta = 2.0, n = 4.0;
  ASSERT_DOUBLE_EQ((beta + 2.0) / (n * (n * beta + 2.0)), 0.1);
  expect_mean_near(w2, 0.1);
}

TEST(GammaMomentExact, Values) {
  EXPECT_EQ(gamma_moment_exact(make_rational(7, 3), 0), 1);
  EXPECT_EQ(gamma_moment_exact(1, 3), 6);
  EXPECT_EQ(gamma_moment_exact(make_rational(3, 2), 2), make_rational(15, 4));
}

TEST(GammaMomentExact, RisingFactorialRecursion) {
  for (const Rational& shape : {make_rational(1, 4), make_rational(1, 2), Rational(1),
                                Rational(2), make_rational(37, 5)}) {
    for (unsigned k = 0; k < 10; ++k) {
      EXPECT_EQ(gamma_moment_exact(shape, k + 1), gamma_moment_exact(shape, k) * (shape + k));
    }
  }
}

TEST(GaussianMomentExact, Values) {
  EXPECT_EQ(gaussian_moment_exact(0), 1);
  EXPECT_EQ(gaussian_moment_exact(1), 0);
  EXPECT_EQ(gaussian_moment_exact(6), 15);
  EXPECT_EQ(gaussian_moment_exact(7), 0);
  EXPECT_EQ(gaussian_moment_exact(10), 945);
}
