#include "asg/rwmh.hpp"

#include <chrono>
#include <cmath>

#include "asg/error.hpp"

namespace asg {

void RwmhConfig::validate(std::size_t dim) const {
  chain.validate();
  if (proposal_sd.size() != 1 && proposal_sd.size() != dim) {
    throw InvalidArgument("rwmh: proposal_sd needs 1 or " + std::to_string(dim) + " entries");
  }
  for (double sd : proposal_sd) {
    if (!(sd > 0.0) || !std::isfinite(sd)) throw InvalidArgument("rwmh: proposal_sd must be positive");
  }
}

ChainOutput run_rwmh(const LogKernel& kernel, const std::optional<std::vector<double>>& x0,
                     const RwmhConfig& config) {
  const std::size_t m = kernel.dim();
  config.validate(m);
  const ChainConfig& cc = config.chain;
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(clock::now() - start).count();
  };

  ChainState state = make_chain_state(kernel, x0 ? *x0 : default_initial_point(kernel, cc));
  Rng rng(cc.seed, cc.stream);
  std::vector<double> sd(m);
  for (std::size_t j = 0; j < m; ++j) sd[j] = config.proposal_sd.size() == 1 ? config.proposal_sd[0] : config.proposal_sd[j];

  const std::size_t total = cc.total_iterations();
  ChainOutput out;
  out.sampler = "rwmh";
  out.config = cc;
  out.samples.resize(static_cast<Eigen::Index>(cc.n_samples), static_cast<Eigen::Index>(m));
  out.log_k_trace.reserve(total);
  out.retained_at_seconds.reserve(cc.n_samples);

  std::vector<double> proposal(m);
  std::size_t accepted = 0;
  std::size_t iterations = 0;
  std::size_t kept = 0;
  for (std::size_t t = 1; t <= total; ++t) {
    for (std::size_t j = 0; j < m; ++j) proposal[j] = state.x[j] + sd[j] * rng.normal();
    const double lk_new = kernel.log_eval(proposal);
    // Draw V every iteration so the stream does not depend on the outcome.
    const double log_v = std::log(rng.uniform01());
    if (log_v < lk_new - state.log_k) {
      state.x.swap(proposal);
      state.log_k = lk_new;
      ++accepted;
    }
    ++iterations;
    ++out.proposals;
    out.log_k_trace.push_back(state.log_k);
    if (t > cc.burn_in && (t - cc.burn_in) % cc.thin == 0) {
      for (std::size_t j = 0; j < m; ++j) {
        out.samples(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(j)) = state.x[j];
      }
      ++kept;
      out.retained_at_seconds.push_back(elapsed());
    }
    if (cc.time_limit_seconds > 0.0 && elapsed() >= cc.time_limit_seconds) {
      out.stopped_on_time = t < total;
      break;
    }
  }
  if (kept < cc.n_samples) out.samples.conservativeResize(static_cast<Eigen::Index>(kept), Eigen::NoChange);
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(iterations);
  out.wall_time_seconds = elapsed();
  return out;
}

}  // namespace asg
