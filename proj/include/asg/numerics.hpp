#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace asg::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 50;
  /// Hard ceiling on the number of leaf segments kept by the adaptive loop.
  std::size_t max_segments = 4000;
  /// Interior points at which the initial interval is pre-split.
  std::vector<double> breakpoints{};
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t nonfinite_evaluations = 0;
  bool converged = false;
};

/// One accepted leaf of the adaptive subdivision.
struct QuadSegment {
  double lo;
  double hi;
  double value;
  double error;
  int depth;
};

/// Quadrature result together with the ordered leaf partition of [lo, hi].
/// Segments are sorted by `lo` and tile the interval.
struct QuadPartition {
  QuadResult result;
  std::vector<QuadSegment> segments;
};

/// Single 15-point Gauss-Kronrod panel on [lo, hi].
/// Non-finite integrand values count as zero and are tallied in `nonfinite`.
struct Gk15Panel {
  double value;
  double error;
};
Gk15Panel gauss_kronrod15(const ScalarFn& f, double lo, double hi, std::size_t& nonfinite);

/// The 15 Kronrod abscissae of a panel on [lo, hi], in increasing order.
std::array<double, 15> gauss_kronrod15_nodes(double lo, double hi);

/// Globally adaptive Gauss-Kronrod (7/15) quadrature.
///
/// The segment with the largest error estimate is bisected until
/// sum(errors) <= max(abs_tol, rel_tol * |value|). Segments at `max_depth`
/// are frozen. If more than half of all integrand evaluations are non-finite
/// the result is flagged as not converged regardless of the error estimate.
QuadResult adaptive_quadrature(const ScalarFn& f, double lo, double hi,
                               const QuadOptions& opts = {});

/// Same as adaptive_quadrature but also returns the leaf partition, which the
/// support estimator reuses to evaluate partial integrals cheaply.
QuadPartition adaptive_partition(const ScalarFn& f, double lo, double hi,
                                 const QuadOptions& opts = {});

struct RootOptions {
  double x_tol = 1e-10;
  double f_tol = 1e-9;
  int max_iterations = 200;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Brent's method (bisection safeguarded inverse-quadratic / secant steps).
///
/// Requires f(lo) and f(hi) of opposite sign, or one endpoint with
/// |f| <= f_tol. Throws BracketError otherwise. Returns once |f(x)| <= f_tol
/// or the bracket is narrower than x_tol; the root always lies in [lo, hi].
RootResult find_root(const ScalarFn& f, double lo, double hi, const RootOptions& opts = {});

}  // namespace asg::numerics
