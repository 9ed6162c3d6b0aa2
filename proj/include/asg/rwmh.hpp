#pragma once

#include <optional>
#include <vector>

#include "asg/sampler.hpp"

namespace asg {

struct RwmhConfig {
  ChainConfig chain{};
  /// One entry per coordinate, or a single entry broadcast to all.
  std::vector<double> proposal_sd{1.0};

  void validate(std::size_t dim) const;
};

/// Gaussian random-walk Metropolis-Hastings with the same burn-in, thinning
/// and trace bookkeeping as run_asg. One proposal per iteration.
ChainOutput run_rwmh(const LogKernel& kernel, const std::optional<std::vector<double>>& x0,
                     const RwmhConfig& config);

}  // namespace asg
