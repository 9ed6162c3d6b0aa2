#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "asg/rng.hpp"
#include "asg/stats.hpp"

using asg::Rng;

TEST(Rng, SameSeedSameSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, StreamsDiffer) {
  Rng a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    same_ab += x == y;
    same_ac += x == z;
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(Rng, StreamIsJumpedBase) {
  Rng a(9, 2), b(9, 0);
  b.jump();
  b.jump();
  EXPECT_EQ(a.state(), b.state());
}

TEST(Rng, Uniform01IsOpenAndUniform) {
  Rng r(1);
  std::vector<double> xs(100000);
  for (auto& x : xs) {
    x = r.uniform01();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
  const auto t = asg::stats::ks_one_sample(xs, [](double x) { return x; });
  EXPECT_GT(t.p_value, 0.01);
}

TEST(Rng, NormalPassesKs) {
  Rng r(2);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = r.normal();
  const auto t = asg::stats::ks_one_sample(xs, [](double x) { return asg::stats::normal_cdf(x); });
  EXPECT_GT(t.p_value, 0.01);
}

TEST(Rng, StreamsAreUncorrelated) {
  Rng a(7, 0), b(7, 1);
  const int n = 100000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform01(), y = b.uniform01();
    sx += x, sy += y, sxy += x * y, sxx += x * x, syy += y * y;
  }
  const double cov = sxy / n - sx / n * sy / n;
  const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(corr), 0.015);
}

TEST(Rng, SatisfiesUniformRandomBitGenerator) {
  static_assert(std::uniform_random_bit_generator<Rng>);
  SUCCEED();
}
