#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "asg/kernel.hpp"
#include "asg/rng.hpp"
#include "asg/support.hpp"

namespace asg {

enum class ScanOrder { systematic, random_permutation };

const char* to_string(ScanOrder s);
ScanOrder scan_order_from_string(const std::string& s);

struct ChainConfig {
  std::size_t n_samples = 1000;
  std::size_t burn_in = 250;
  std::size_t thin = 1;
  double epsilon = 0.01;
  double s0 = 1.0;
  std::uint64_t seed = 0;
  /// RNG stream index; multi-chain runs give chain i stream (stream + i).
  std::uint64_t stream = 0;
  ScanOrder scan = ScanOrder::systematic;
  std::size_t max_rejections = 10000;
  std::pair<double, double> fallback_range{-100.0, 100.0};
  /// Skip re-estimation when the other coordinates are bit-identical to
  /// the previous estimate for this coordinate.
  bool reuse_bracket_if_unchanged = false;
  /// Widen the (1 - epsilon) bracket until both ends are outside the
  /// current slice, so the slice is not truncated to the bracket.
  bool extend_to_slice = true;
  /// Use a kernel-provided closed-form conditional when there is one.
  bool use_fast_conditional = true;
  /// Stop early once this much wall time has passed (0 disables). The
  /// output then holds however many draws were retained.
  double time_limit_seconds = 0.0;

  /// T = B + N * L.
  std::size_t total_iterations() const { return burn_in + n_samples * thin; }
  /// Throws InvalidArgument on any out-of-range field.
  void validate() const;
};

struct ChainState {
  std::vector<double> x;
  double log_k = 0.0;
  /// Warm-start bracket per coordinate (unset before the first update).
  std::vector<std::optional<std::pair<double, double>>> brackets;
  std::size_t iteration = 0;
  /// Conditioning point of the last estimate per coordinate (bracket reuse).
  std::vector<std::vector<double>> last_conditioning;
};

struct SweepStats {
  double log_u = 0.0;
  std::size_t proposals = 0;
  std::size_t cap_hits = 0;
  std::size_t fallback_uses = 0;
  std::size_t reused_brackets = 0;
  std::size_t support_evaluations = 0;
  /// Coordinate updates whose bracket had to be widened to cover the slice.
  std::size_t extended_brackets = 0;
};

struct ChainOutput {
  std::string sampler;
  /// N x m, one retained draw per row.
  Eigen::MatrixXd samples;
  /// log K after each of the T iterations, burn-in included.
  std::vector<double> log_k_trace;
  /// Seconds since the start of the run at which each row was retained.
  std::vector<double> retained_at_seconds;
  double wall_time_seconds = 0.0;
  std::size_t cap_hits = 0;
  std::size_t fallback_uses = 0;
  std::size_t coordinate_updates = 0;
  std::size_t proposals = 0;
  std::size_t reused_brackets = 0;
  std::size_t extended_brackets = 0;
  /// Only meaningful for Metropolis samplers; NaN for ASG.
  double acceptance_rate = 0.0;
  bool stopped_on_time = false;
  ChainConfig config;

  double cap_hit_rate() const;
};

/// Zero vector when K(0) > 0, otherwise the best of 100 uniform probes in
/// fallback_range^m. Throws InvalidState if every probe has K = 0.
std::vector<double> default_initial_point(const LogKernel& kernel, const ChainConfig& config);

/// Validated state at x0 with finite log K. Throws InvalidArgument on a
/// dimension mismatch and InvalidState when K(x0) = 0.
ChainState make_chain_state(const LogKernel& kernel, std::vector<double> x0);

/// One height draw shared by all m coordinate updates.
SweepStats single_sweep(ChainState& state, const LogKernel& kernel, const ChainConfig& config,
                        Rng& rng);

ChainOutput run_asg(const LogKernel& kernel, const std::optional<std::vector<double>>& x0,
                    const ChainConfig& config);

}  // namespace asg
