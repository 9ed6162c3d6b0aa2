#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "asg/error.hpp"
#include "asg/kernels.hpp"
#include "asg/numerics.hpp"
#include "asg/rng.hpp"
#include "asg/stats.hpp"
#include "asg/support.hpp"
#include "oracles.hpp"

using namespace asg;

namespace {

double gauss(double z) { return -0.5 * z * z; }

SupportEstimate rosen(std::size_t coord, double fixed, double eps = 0.01) {
  static const auto k = make_kernel("rosenbrock");
  const double f[1] = {fixed};
  SupportOptions o;
  o.epsilon = eps;
  return effective_support_1d(Conditional1D(k, coord, f), o);
}

// Independent check of the tail masses with a fine trapezoid grid.
struct Masses {
  double left, inside, right;
};
Masses masses(const LogDensity1D& lg, double lo, double hi, double a, double b) {
  const auto g = [&](double x) { return std::exp(lg(x)); };
  const double z = oracle::midpoint_sum(g, lo, hi, 4'000'000);
  return {oracle::midpoint_sum(g, lo, a, 2'000'000) / z, oracle::midpoint_sum(g, a, b, 2'000'000) / z,
          oracle::midpoint_sum(g, b, hi, 2'000'000) / z};
}

}  // namespace

TEST(CauchyMap, AnalyticPoints) {
  const CauchyMap c(1.0);
  EXPECT_EQ(c.cdf(0.0), 0.5);
  EXPECT_EQ(c.quantile(0.5), 0.0);
  EXPECT_NEAR(c.quantile(0.75), 1.0, 1e-15);
  EXPECT_NEAR(CauchyMap(2.5).quantile(0.75), 2.5, 1e-15);
  EXPECT_NEAR(c.pdf(0.0), 1 / std::numbers::pi, 1e-16);
  EXPECT_NEAR(c.log_pdf(3.0), std::log(c.pdf(3.0)), 1e-14);
  EXPECT_TRUE(std::isfinite(c.log_pdf(1e200)));
  EXPECT_TRUE(std::isfinite(c.quantile(0.0)));
  EXPECT_TRUE(std::isfinite(c.quantile(1.0)));
}

TEST(CauchyMap, RoundTrip) {
  const CauchyMap c(1.0);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-1e4, 1e4);
    ASSERT_LE(std::abs(c.quantile(c.cdf(x)) - x), 1e-9 * std::max(1.0, std::abs(x))) << x;
  }
}

TEST(Support, IndicatorUnitInterval) {
  const auto e = effective_support_1d([](double z) { return z > 0 && z < 1 ? 0.0 : -INFINITY; });
  EXPECT_NEAR(e.lower, 0.005, 1e-6);
  EXPECT_NEAR(e.upper, 0.995, 1e-6);
  EXPECT_NEAR(e.norm_const, 1.0, 1e-6);
  EXPECT_EQ(e.method, SupportMethod::cauchy_transform);
}

TEST(Support, StandardNormalMatchesInverseCdf) {
  for (double eps : {0.01, 0.05}) {
    SupportOptions o;
    o.epsilon = eps;
    const auto e = effective_support_1d(gauss, o);
    const double q = stats::normal_quantile(1 - eps / 2);
    EXPECT_NEAR(e.lower, -q, 1e-3);
    EXPECT_NEAR(e.upper, q, 1e-3);
    EXPECT_NEAR(e.norm_const, std::sqrt(2 * std::numbers::pi), 1e-6);
  }
}

TEST(Support, RosenbrockConditionalsMatchTables) {
  auto check = [](const SupportEstimate& e, double lo, double hi) {
    EXPECT_NEAR(e.lower, lo, 5e-3);
    EXPECT_NEAR(e.upper, hi, 5e-3);
  };
  check(rosen(1, 0.0), -1.256, 1.256);
  check(rosen(1, 1.0), -0.304, 2.209);
  check(rosen(0, 0.0), -1.041, 1.041);
  check(rosen(0, -2.0), -0.602, 0.602);
  check(rosen(0, 1.0), -1.426, 1.426);
}

TEST(Support, RosenbrockOffCentreRowUsesCorrectedBracketing) {
  // X2 | X1 = -2 is N(40/21 * 2, 1/4.2)-like; its equal-tail lower bound is
  // far from the 0 the fixed [0, 0.5] bracket would give.
  const auto e = rosen(1, -2.0);
  const auto o = oracle::grid_interval([](double z) { return std::exp(-0.4 - z * z / 10 - 2 * (z - 4) * (z - 4)); },
                                       -10, 15, 0.01);
  EXPECT_NEAR(e.lower, o.lower, 1e-4);
  EXPECT_NEAR(e.upper, o.upper, 1e-4);
  EXPECT_GT(e.lower, 2.0);
}

TEST(Support, MassAndEqualTails) {
  const std::vector<std::pair<std::string, LogDensity1D>> cases{
      {"normal", gauss},
      {"skewed", [](double z) { return -z * z / 10 - 2 * (z - 1) * (z - 1); }},
      {"quartic", [](double z) { return -z * z / 10 - 2 * z * z * z * z; }},
      {"laplace", [](double z) { return -std::abs(z - 3); }},
      {"gamma3", [](double z) { return z > 0 ? 2 * std::log(z) - z : -INFINITY; }},
  };
  const double tol = 1e-7;
  for (const auto& [name, lg] : cases) {
    const double eps = 0.01;
    SupportOptions o;
    o.epsilon = eps;
    const auto e = effective_support_1d(lg, o);
    const auto m = masses(lg, -60, 60, e.lower, e.upper);
    EXPECT_GE(m.inside, 1 - eps - 10 * tol - 1e-6) << name;
    EXPECT_LE(m.inside, 1.0) << name;
    EXPECT_LE(m.left, eps / 2 + 10 * tol + 1e-6) << name;
    EXPECT_LE(m.right, eps / 2 + 10 * tol + 1e-6) << name;
  }
}

TEST(Support, NestedInEpsilon) {
  const LogDensity1D lg = [](double z) { return -z * z / 10 - 2 * (z - 1) * (z - 1); };
  double prev_lo = -INFINITY, prev_hi = INFINITY;
  for (double eps : {0.001, 0.005, 0.01, 0.05, 0.1, 0.3}) {
    SupportOptions o;
    o.epsilon = eps;
    const auto e = effective_support_1d(lg, o);
    EXPECT_GE(e.lower, prev_lo - 1e-9);
    EXPECT_LE(e.upper, prev_hi + 1e-9);
    prev_lo = e.lower;
    prev_hi = e.upper;
  }
}

TEST(Support, TranslationEquivariance) {
  const auto base = [](double z) { return -z * z / 10 - 2 * (z - 1) * (z - 1); };
  const auto e0 = effective_support_1d(base);
  for (double c : {-10.0, -3.5, -0.2, 0.7, 4.0, 10.0}) {
    const auto e = effective_support_1d([&](double z) { return base(z - c); });
    EXPECT_NEAR(e.lower, e0.lower + c, 1e-5) << c;
    EXPECT_NEAR(e.upper, e0.upper + c, 1e-5) << c;
  }
}

TEST(Support, ScaleRobustness) {
  for (double s0 : {0.5, 1.0, 2.0}) {
    SupportOptions o;
    o.s0 = s0;
    const auto e = effective_support_1d(gauss, o);
    EXPECT_NEAR(e.lower, -2.5758293, 1e-3) << s0;
    EXPECT_NEAR(e.upper, 2.5758293, 1e-3) << s0;
  }
}

TEST(Support, GridPathAgreesWithCauchyPath) {
  SupportOptions o;
  o.path = SupportPath::grid_only;
  const auto g = effective_support_1d(gauss, o);
  EXPECT_EQ(g.method, SupportMethod::grid_fallback);
  EXPECT_NEAR(g.lower, -2.5758293, 1e-3);
  EXPECT_NEAR(g.upper, 2.5758293, 1e-3);
  o.parallel_grid = true;
  const auto gp = effective_support_1d(gauss, o);
  EXPECT_EQ(gp.lower, g.lower);
  EXPECT_EQ(gp.upper, g.upper);
}

TEST(Support, AllZeroKernelIsUnsupported) {
  EXPECT_THROW(effective_support_1d([](double) { return -INFINITY; }), UnsupportedKernel);
}

TEST(Support, InvalidOptions) {
  SupportOptions o;
  o.epsilon = 0.0;
  EXPECT_THROW(effective_support_1d(gauss, o), InvalidArgument);
  o.epsilon = 1.0;
  EXPECT_THROW(effective_support_1d(gauss, o), InvalidArgument);
  o = {};
  o.s0 = -1;
  EXPECT_THROW(effective_support_1d(gauss, o), InvalidArgument);
}

TEST(Support, FarNarrowMassFoundWithHint) {
  // A narrow bump at 80 is invisible to a coarse Cauchy partition; the
  // current-point hint (or the grid fallback) must still locate it.
  const LogDensity1D lg = [](double z) { return -0.5 * (z - 80) * (z - 80) / 0.0025; };
  SupportOptions o;
  o.hint = 80.01;
  const auto e = effective_support_1d(lg, o);
  EXPECT_NEAR(e.lower, 80 - 0.05 * 2.5758293, 1e-4);
  EXPECT_NEAR(e.upper, 80 + 0.05 * 2.5758293, 1e-4);
}

TEST(Support, FarAwayMassWithoutHintStillCorrect) {
  const LogDensity1D lg = [](double z) { return -0.5 * (z - 80) * (z - 80) / 0.0025; };
  const auto e = effective_support_1d(lg);
  EXPECT_NEAR(e.lower, 80 - 0.05 * 2.5758293, 2e-3);
  EXPECT_NEAR(e.upper, 80 + 0.05 * 2.5758293, 2e-3);
}

TEST(Support, BetaMixtureSupersetOfSlices) {
  const auto k = make_kernel("beta_mixture");
  const auto lg = [&](double x) { return k.log_eval(std::span<const double>(&x, 1)); };
  const double eps = 0.01;
  SupportOptions o;
  o.epsilon = eps;
  const auto e = effective_support_1d(lg, o);
  EXPECT_NEAR(e.norm_const, 1.0, 1e-5);
  // Brute-force slice sets on a 10^6-point grid over the whole support.
  const int n = 1'000'000;
  const double lo = -5.0, hi = 7.0, h = (hi - lo) / n;
  std::vector<double> g(n);
  double gmax_in = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (i + 0.5) * h;
    g[i] = std::exp(lg(x));
    if (x > e.lower && x < e.upper) gmax_in = std::max(gmax_in, g[i]);
  }
  for (double frac : {0.01, 0.1, 0.3, 0.6, 0.9}) {
    const double u = frac * gmax_in;
    double total = 0.0, outside = 0.0;
    for (int i = 0; i < n; ++i) {
      if (g[i] <= u) continue;
      total += g[i] * h;
      const double x = lo + (i + 0.5) * h;
      if (x < e.lower || x > e.upper) outside += g[i] * h;
    }
    // Near the integrable singularities most of a high slice lies in the
    // excluded tails; what the sampler relies on is that this part carries
    // at most eps of the target's mass.
    EXPECT_GT(total, outside) << frac;
    EXPECT_LE(outside, eps + 1e-4) << frac;
  }
}

TEST(Support, ConditionalAndKernelOverloads) {
  const auto k = make_kernel("gaussian", {{"sd", 2.0}});
  const auto e = effective_support_1d(k);
  EXPECT_NEAR(e.upper, 2 * 2.5758293, 2e-3);
  const auto k2 = make_kernel("gaussian", {{"dim", 2}});
  EXPECT_THROW(effective_support_1d(k2), InvalidArgument);
}
