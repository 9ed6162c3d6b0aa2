#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "asg/rng.hpp"
#include "asg/stats.hpp"

using namespace asg::stats;

TEST(Stats, KolmogorovSurvivalKnownValues) {
  // Tabulated quantiles of the Kolmogorov distribution.
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(1.2238), 0.10, 1e-4);
  EXPECT_NEAR(kolmogorov_survival(0.0), 1.0, 1e-12);
  // Both branches meet smoothly.
  EXPECT_NEAR(kolmogorov_survival(1.1799999), kolmogorov_survival(1.18), 1e-6);
}

TEST(Stats, KsOneSampleNullCalibration) {
  asg::Rng rng(17);
  int rejections = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(500);
    for (auto& v : x) v = rng.uniform01();
    if (ks_one_sample(x, [](double t) { return t; }).p_value < 0.05) ++rejections;
  }
  EXPECT_GE(rejections, 2);
  EXPECT_LE(rejections, 22);
}

TEST(Stats, KsOneSampleDetectsShift) {
  asg::Rng rng(1);
  std::vector<double> x(2000);
  for (auto& v : x) v = rng.normal() + 0.2;
  EXPECT_LT(ks_one_sample(x, [](double t) { return normal_cdf(t); }).p_value, 1e-4);
}

TEST(Stats, KsTwoSampleWithTies) {
  const std::vector<double> a{1, 1, 2, 2, 3, 3};
  const std::vector<double> b{1, 1, 2, 2, 3, 3};
  const auto r = ks_two_sample(a, b);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
  const std::vector<double> c{0, 0, 0, 0};
  const std::vector<double> d{1, 1, 1, 1};
  EXPECT_EQ(ks_two_sample(c, d).statistic, 1.0);
}

TEST(Stats, ChiSquare) {
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_sf(30.14352720564616, 19), 0.05, 1e-9);
  const std::vector<std::size_t> flat(20, 100);
  EXPECT_NEAR(chi_square_uniform(flat).p_value, 1.0, 1e-12);
}

TEST(Stats, Distributions) {
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_quantile(0.005), -2.5758293035489, 1e-10);
  // Gamma(1, 1) is Exp(1).
  EXPECT_NEAR(gamma_cdf(2.0, 1.0, 1.0), 1 - std::exp(-2.0), 1e-14);
  EXPECT_NEAR(gamma_cdf(1.0, 2.0, 3.0), 1 - std::exp(-3.0) * 4.0, 1e-14);
  // Beta(2, 2): 3t^2 - 2t^3.
  EXPECT_NEAR(beta_cdf(0.3, 2, 2), 3 * 0.09 - 2 * 0.027, 1e-14);
  EXPECT_NEAR(beta_cdf(0.25, 0.5, 1), 0.5, 1e-14);
}

TEST(Stats, Moments) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(x), 2.5);
  EXPECT_NEAR(stddev(x), std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 3, 2, 1}, 0.25), 1.75);
}
