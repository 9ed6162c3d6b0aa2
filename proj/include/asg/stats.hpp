#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace asg::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

/// p-value of a KS statistic with effective sample size n_eff, using the
/// Stephens small-sample correction on lambda.
double ks_pvalue(double d, double n_eff);

/// One-sample KS against a continuous CDF.
TestResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS; ties are handled by advancing both sides together.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Upper-tail chi-square probability.
double chi_square_sf(double statistic, double dof);

/// Pearson chi-square against equal expected counts.
TestResult chi_square_uniform(std::span<const std::size_t> counts);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);
double normal_quantile(double p);
double gamma_cdf(double x, double shape, double rate);
/// Regularized incomplete beta I_t(a, b) for t in [0, 1].
double beta_cdf(double t, double a, double b);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> x);
/// Linear-interpolation quantile (Hyndman-Fan type 7).
double quantile(std::vector<double> x, double p);

}  // namespace asg::stats
