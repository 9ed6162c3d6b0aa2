#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "asg/kernel.hpp"
#include "asg/numerics.hpp"

namespace asg {

/// Cauchy(0, s0) distribution maps used for the probability-integral
/// change of variables.
class CauchyMap {
 public:
  /// Quantile arguments are clamped to [kClamp, 1 - kClamp] before use.
  static constexpr double kClamp = 1e-12;

  explicit CauchyMap(double s0);

  double scale() const { return s0_; }
  double cdf(double x) const;
  double pdf(double x) const;
  double log_pdf(double x) const;
  double quantile(double u) const;

 private:
  double s0_;
};

enum class SupportMethod { cauchy_transform, grid_fallback };

/// Which estimation path to run. `automatic` tries the Cauchy transform and
/// falls back to the grid; the other two force one path (tests, diagnostics).
enum class SupportPath { automatic, cauchy_only, grid_only };

const char* to_string(SupportMethod m);

struct SupportOptions {
  double epsilon = 0.01;
  double s0 = 1.0;
  std::pair<double, double> fallback_range{-100.0, 100.0};
  /// Previous bracket for this coordinate. Only widens the fallback grid and
  /// seeds quadrature breakpoints; estimation always runs in full.
  std::optional<std::pair<double, double>> warm_start{};
  /// A point known to carry mass (the chain's current coordinate).
  std::optional<double> hint{};
  std::size_t grid_points = 10001;
  /// Grid cells are kept where g / max(g) exceeds this.
  double grid_threshold = 1e-10;
  /// Fraction of overflow-clamped integrand evaluations that fails the
  /// Cauchy path.
  double clamp_fraction_limit = 1e-3;
  SupportPath path = SupportPath::automatic;
  /// Relative-only tolerance: integrable endpoint singularities cannot reach
  /// 1e-8 before panels shrink to machine resolution in u.
  numerics::QuadOptions quad{.abs_tol = 0.0, .rel_tol = 1e-7};
  /// Evaluate the fallback grid with OpenMP.
  bool parallel_grid = false;
};

struct SupportEstimate {
  double lower = 0.0;
  double upper = 0.0;
  /// May overflow to +inf for kernels far above unit scale; log_norm_const
  /// is always finite.
  double norm_const = 0.0;
  double log_norm_const = 0.0;
  SupportMethod method = SupportMethod::cauchy_transform;
  double epsilon = 0.0;
  double s0 = 0.0;
  /// Why the Cauchy path was abandoned; empty on the primary path.
  std::string fallback_reason;
  std::size_t evaluations = 0;
};

using LogDensity1D = std::function<double(double)>;

/// Equal-tailed interval [a, b] holding 1 - epsilon of the normalized 1-D
/// kernel exp(log_g). Throws InvalidArgument for bad options,
/// UnsupportedKernel when g vanishes on the whole fallback grid, and
/// SupportError when the fallback CDF cannot be inverted.
SupportEstimate effective_support_1d(const LogDensity1D& log_g, const SupportOptions& opts = {});

SupportEstimate effective_support_1d(const Conditional1D& g, const SupportOptions& opts = {});

/// 1-D kernels only.
SupportEstimate effective_support_1d(const LogKernel& kernel, const SupportOptions& opts = {});

}  // namespace asg
