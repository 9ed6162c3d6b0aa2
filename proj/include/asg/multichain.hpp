#pragma once

#include <optional>
#include <vector>

#include "asg/rwmh.hpp"
#include "asg/sampler.hpp"

namespace asg {

/// Chain i uses RNG stream config.stream + i; everything else is shared.
/// With `parallel` the chains run on an OpenMP team, otherwise one after the
/// other. Samples and traces are identical either way.
std::vector<ChainOutput> run_asg_chains(const LogKernel& kernel, std::size_t n_chains,
                                        const ChainConfig& config, bool parallel = true,
                                        const std::optional<std::vector<double>>& x0 = std::nullopt);

std::vector<ChainOutput> run_rwmh_chains(const LogKernel& kernel, std::size_t n_chains,
                                         const RwmhConfig& config, bool parallel = true,
                                         const std::optional<std::vector<double>>& x0 = std::nullopt);

/// Same as run_asg_chains(..., parallel=false); kept as the reference.
std::vector<ChainOutput> run_asg_chains_serial(const LogKernel& kernel, std::size_t n_chains,
                                               const ChainConfig& config,
                                               const std::optional<std::vector<double>>& x0 = std::nullopt);

/// Default team size: ASG_NUM_THREADS if set and positive, else the
/// OpenMP processor count.
int default_parallelism();

}  // namespace asg
