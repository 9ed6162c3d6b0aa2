#include "asg/multichain.hpp"

#include <cstdlib>
#include <exception>
#include <string>

#include <omp.h>

namespace asg {

namespace {

template <class Run>
std::vector<ChainOutput> run_many(std::size_t n, bool parallel, Run&& run) {
  std::vector<ChainOutput> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (parallel) num_threads(default_parallelism())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = run(idx);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

int default_parallelism() {
  if (const char* env = std::getenv("ASG_NUM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // fall through to the processor count
    }
  }
  return omp_get_num_procs();
}

std::vector<ChainOutput> run_asg_chains(const LogKernel& kernel, std::size_t n_chains,
                                        const ChainConfig& config, bool parallel,
                                        const std::optional<std::vector<double>>& x0) {
  config.validate();
  return run_many(n_chains, parallel, [&](std::size_t i) {
    ChainConfig c = config;
    c.stream = config.stream + i;
    return run_asg(kernel, x0, c);
  });
}

std::vector<ChainOutput> run_rwmh_chains(const LogKernel& kernel, std::size_t n_chains,
                                         const RwmhConfig& config, bool parallel,
                                         const std::optional<std::vector<double>>& x0) {
  config.validate(kernel.dim());
  return run_many(n_chains, parallel, [&](std::size_t i) {
    RwmhConfig c = config;
    c.chain.stream = config.chain.stream + i;
    return run_rwmh(kernel, x0, c);
  });
}

std::vector<ChainOutput> run_asg_chains_serial(const LogKernel& kernel, std::size_t n_chains,
                                               const ChainConfig& config,
                                               const std::optional<std::vector<double>>& x0) {
  config.validate();
  std::vector<ChainOutput> out;
  out.reserve(n_chains);
  for (std::size_t i = 0; i < n_chains; ++i) {
    ChainConfig c = config;
    c.stream = config.stream + i;
    out.push_back(run_asg(kernel, x0, c));
  }
  return out;
}

}  // namespace asg
