#include "asg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asg/error.hpp"
#include "asg/stats.hpp"

namespace asg {

namespace {

// Centred copy plus lag-0 autocovariance, shared by both ACF paths.
std::vector<double> centred(std::span<const double> x, std::size_t max_lag, double& c0) {
  const std::size_t n = x.size();
  if (n < 4) throw DegenerateSeries("acf: need at least 4 values, got " + std::to_string(n));
  if (max_lag > n - 1) throw InvalidArgument("acf: max_lag exceeds T - 1");
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  std::vector<double> d(n);
  c0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = x[i] - m;
    c0 += d[i] * d[i];
  }
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw DegenerateSeries("acf: series is constant or non-finite");
  return d;
}

double lag_sum(const std::vector<double>& d, std::size_t k) {
  double s = 0.0;
  for (std::size_t t = 0; t + k < d.size(); ++t) s += d[t] * d[t + k];
  return s;
}

}  // namespace

std::vector<double> acf(std::span<const double> series, std::size_t max_lag, bool parallel) {
  double c0 = 0.0;
  const auto d = centred(series, max_lag, c0);
  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  const auto count = static_cast<std::ptrdiff_t>(max_lag);
#pragma omp parallel for schedule(dynamic, 16) if (parallel && max_lag >= 32)
  for (std::ptrdiff_t k = 1; k <= count; ++k) {
    rho[static_cast<std::size_t>(k)] = lag_sum(d, static_cast<std::size_t>(k)) / c0;
  }
  return rho;
}

std::vector<double> acf_serial(std::span<const double> series, std::size_t max_lag) {
  double c0 = 0.0;
  const auto d = centred(series, max_lag, c0);
  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) rho[k] = lag_sum(d, k) / c0;
  return rho;
}

IactEstimate iact_geyer_detail(std::span<const double> rho) {
  if (rho.empty()) throw InvalidArgument("iact_geyer: empty autocorrelation vector");
  IactEstimate est;
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < rho.size(); ++m) {
    double gamma = rho[2 * m] + rho[2 * m + 1];
    if (!(gamma > 0.0)) break;
    gamma = std::min(gamma, prev);
    prev = gamma;
    sum += gamma;
    ++est.pairs;
  }
  est.tau = -1.0 + 2.0 * sum;
  if (!(est.tau >= kTauFloor)) {
    est.tau = kTauFloor;
    est.floored = true;
  }
  return est;
}

double iact_geyer(std::span<const double> rho) { return iact_geyer_detail(rho).tau; }

std::size_t default_max_lag(std::size_t n) {
  if (n < 2) return 0;
  const auto root = static_cast<std::size_t>(std::floor(10.0 * std::sqrt(static_cast<double>(n))));
  return std::min(n - 1, root);
}

double ess(std::span<const double> series, std::optional<std::size_t> max_lag) {
  const std::size_t lag = max_lag.value_or(default_max_lag(series.size()));
  return static_cast<double>(series.size()) / iact_geyer(acf(series, lag));
}

EssReport ess_report(const Eigen::MatrixXd& samples, double wall_time_seconds,
                     std::optional<std::size_t> max_lag, bool parallel) {
  const auto n = static_cast<std::size_t>(samples.rows());
  const auto m = static_cast<std::size_t>(samples.cols());
  if (m == 0) throw InvalidArgument("ess_report: no columns");
  EssReport r;
  r.n_retained = n;
  r.max_lag = max_lag.value_or(default_max_lag(n));
  r.wall_time_seconds = wall_time_seconds;
  r.per_dim_tau.resize(m);
  r.per_dim_ess.resize(m);
  r.acf.resize(m);
  std::vector<char> floored(m, 0);
  std::vector<std::exception_ptr> errors(m);

  const auto count = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 1) if (parallel && m > 1)
  for (std::ptrdiff_t jj = 0; jj < count; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    try {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      r.acf[j] = acf(col, r.max_lag, false);
      const auto est = iact_geyer_detail(r.acf[j]);
      r.per_dim_tau[j] = est.tau;
      r.per_dim_ess[j] = static_cast<double>(n) / est.tau;
      floored[j] = est.floored ? 1 : 0;
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  r.tau_floored.assign(floored.begin(), floored.end());
  r.min_ess = *std::min_element(r.per_dim_ess.begin(), r.per_dim_ess.end());
  r.ess_per_second = wall_time_seconds > 0.0 ? r.min_ess / wall_time_seconds
                                             : std::numeric_limits<double>::infinity();
  return r;
}

std::vector<double> running_mean(std::span<const double> series) {
  std::vector<double> out(series.size());
  double s = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    s += series[i];
    out[i] = s / static_cast<double>(i + 1);
  }
  return out;
}

StationaritySummary logk_stationarity(std::span<const double> trace, std::size_t burn_in) {
  if (!(trace.size() > 2 * burn_in)) {
    throw InvalidArgument("logk_stationarity: trace length must exceed twice the burn-in");
  }
  const auto post = trace.subspan(burn_in);
  if (post.size() < 4) throw InvalidArgument("logk_stationarity: fewer than 4 post-burn-in values");
  const std::size_t half = post.size() / 2;
  StationaritySummary s;
  const auto ks = stats::ks_two_sample(post.first(half), post.subspan(half));
  s.ks_statistic = ks.statistic;
  s.p_value = ks.p_value;
  s.n_first = half;
  s.n_second = post.size() - half;
  s.running_mean = running_mean(trace);
  return s;
}

}  // namespace asg
