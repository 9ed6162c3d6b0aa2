#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace asg {

/// Biased sample autocorrelation rho_0..rho_max_lag by direct summation.
/// Lags are spread over an OpenMP team when `parallel` is set; every lag is
/// still summed in index order, so the result matches acf_serial exactly.
/// Throws DegenerateSeries for T < 4 or a constant series.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag, bool parallel = true);

/// Single-threaded reference for acf.
std::vector<double> acf_serial(std::span<const double> series, std::size_t max_lag);

struct IactEstimate {
  double tau = 1.0;
  /// The raw estimate fell below the floor and was clamped.
  bool floored = false;
  /// Number of positive Gamma pairs summed.
  std::size_t pairs = 0;
};

inline constexpr double kTauFloor = 1e-3;

/// Geyer initial monotone sequence estimate of the IACT from an ACF.
IactEstimate iact_geyer_detail(std::span<const double> rho);
double iact_geyer(std::span<const double> rho);

/// min(T - 1, floor(10 sqrt(T))).
std::size_t default_max_lag(std::size_t n);

/// T / iact_geyer(acf(series, max_lag)).
double ess(std::span<const double> series, std::optional<std::size_t> max_lag = std::nullopt);

struct EssReport {
  std::vector<double> per_dim_tau;
  std::vector<double> per_dim_ess;
  std::vector<bool> tau_floored;
  double min_ess = 0.0;
  double ess_per_second = 0.0;
  double wall_time_seconds = 0.0;
  std::vector<std::vector<double>> acf;
  std::size_t n_retained = 0;
  std::size_t max_lag = 0;
};

/// Per-column diagnostics of an N x m sample matrix. Dimensions are spread
/// over an OpenMP team when `parallel` is set.
EssReport ess_report(const Eigen::MatrixXd& samples, double wall_time_seconds,
                     std::optional<std::size_t> max_lag = std::nullopt, bool parallel = true);

std::vector<double> running_mean(std::span<const double> series);

struct StationaritySummary {
  double ks_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_first = 0;
  std::size_t n_second = 0;
  /// Running mean over the whole trace, burn-in included.
  std::vector<double> running_mean;
};

/// Two-sample KS between the halves of trace[burn_in:]. Requires
/// trace.size() > 2 * burn_in and at least 4 post-burn-in values.
StationaritySummary logk_stationarity(std::span<const double> trace, std::size_t burn_in);

}  // namespace asg
