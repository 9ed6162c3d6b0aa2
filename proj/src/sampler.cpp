#include "asg/sampler.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "asg/error.hpp"
#include "asg/slice.hpp"

namespace asg {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
  return std::min(i, n - 1);
}

bool same_conditioning(const std::vector<double>& prev, const std::vector<double>& x, std::size_t k) {
  if (prev.size() != x.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i != k && std::bit_cast<std::uint64_t>(prev[i]) != std::bit_cast<std::uint64_t>(x[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(ScanOrder s) {
  return s == ScanOrder::systematic ? "systematic" : "random_permutation";
}

ScanOrder scan_order_from_string(const std::string& s) {
  if (s == "systematic") return ScanOrder::systematic;
  if (s == "random_permutation" || s == "random") return ScanOrder::random_permutation;
  throw InvalidArgument("unknown scan order '" + s + "'");
}

void ChainConfig::validate() const {
  if (n_samples < 1) throw InvalidArgument("chain config: n_samples must be at least 1");
  if (thin < 1) throw InvalidArgument("chain config: thin must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("chain config: epsilon must lie in (0, 1)");
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw InvalidArgument("chain config: s0 must be positive");
  if (max_rejections < 1) throw InvalidArgument("chain config: max_rejections must be at least 1");
  const auto [lo, hi] = fallback_range;
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw InvalidArgument("chain config: fallback_range must be a finite interval lo < hi");
  }
  if (!(time_limit_seconds >= 0.0)) throw InvalidArgument("chain config: time limit must be >= 0");
  if (n_samples > (std::numeric_limits<std::size_t>::max() - burn_in) / thin) {
    throw InvalidArgument("chain config: B + N*L overflows");
  }
}

double ChainOutput::cap_hit_rate() const {
  return coordinate_updates == 0 ? 0.0
                                 : static_cast<double>(cap_hits) / static_cast<double>(coordinate_updates);
}

std::vector<double> default_initial_point(const LogKernel& kernel, const ChainConfig& config) {
  const std::size_t m = kernel.dim();
  std::vector<double> x(m, 0.0);
  if (std::isfinite(kernel.log_eval(x))) return x;

  Rng rng(config.seed, config.stream);
  std::vector<double> best;
  double best_lk = -std::numeric_limits<double>::infinity();
  std::vector<double> probe(m);
  for (int trial = 0; trial < 100; ++trial) {
    for (auto& v : probe) v = rng.uniform(config.fallback_range.first, config.fallback_range.second);
    const double lk = kernel.log_eval(probe);
    if (std::isfinite(lk) && lk > best_lk) {
      best_lk = lk;
      best = probe;
    }
  }
  if (best.empty()) {
    throw InvalidState("no starting point with K > 0 found for kernel '" + kernel.name() +
                       "'; pass x0 explicitly");
  }
  return best;
}

ChainState make_chain_state(const LogKernel& kernel, std::vector<double> x0) {
  if (x0.size() != kernel.dim()) {
    throw InvalidArgument("initial point has dimension " + std::to_string(x0.size()) + ", kernel '" +
                          kernel.name() + "' has " + std::to_string(kernel.dim()));
  }
  ChainState s;
  s.log_k = kernel.log_eval(x0);
  if (!std::isfinite(s.log_k)) throw InvalidState("initial point has K(x0) = 0");
  s.x = std::move(x0);
  s.brackets.assign(s.x.size(), std::nullopt);
  s.last_conditioning.assign(s.x.size(), {});
  return s;
}

SweepStats single_sweep(ChainState& state, const LogKernel& kernel, const ChainConfig& config,
                        Rng& rng) {
  const std::size_t m = kernel.dim();
  if (state.x.size() != m) throw InvalidArgument("single_sweep: state dimension mismatch");
  if (state.brackets.size() != m) state.brackets.assign(m, std::nullopt);
  if (state.last_conditioning.size() != m) state.last_conditioning.assign(m, {});

  SweepStats stats;
  stats.log_u = slice_height(state.log_k, rng);

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  if (config.scan == ScanOrder::random_permutation) {
    for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }

  const auto path = config.use_fast_conditional ? Conditional1D::Path::fast_if_available
                                                : Conditional1D::Path::generic;
  SupportOptions sopt;
  sopt.epsilon = config.epsilon;
  sopt.s0 = config.s0;
  sopt.fallback_range = config.fallback_range;

  for (const std::size_t k : order) {
    const auto g = Conditional1D::at_point(kernel, k, state.x, path);

    std::pair<double, double> bracket;
    if (config.reuse_bracket_if_unchanged && state.brackets[k] &&
        same_conditioning(state.last_conditioning[k], state.x, k)) {
      bracket = *state.brackets[k];
      ++stats.reused_brackets;
    } else {
      sopt.warm_start = state.brackets[k];
      sopt.hint = state.x[k];
      const auto est = effective_support_1d(g, sopt);
      bracket = {est.lower, est.upper};
      stats.support_evaluations += est.evaluations;
      if (est.method == SupportMethod::grid_fallback) ++stats.fallback_uses;
      if (config.reuse_bracket_if_unchanged) state.last_conditioning[k] = state.x;
    }

    const auto log_g = [&g](double z) { return g(z); };
    // The stored bracket (warm start, reuse) stays the (1 - epsilon) estimate.
    state.brackets[k] = bracket;
    if (config.extend_to_slice) {
      const auto ext = extend_bracket_to_slice(log_g, stats.log_u, bracket.first, bracket.second);
      stats.support_evaluations += ext.evaluations;
      if (ext.lower != bracket.first || ext.upper != bracket.second) ++stats.extended_brackets;
      bracket = {ext.lower, ext.upper};
    }

    const auto draw = slice_1d_fixed_u(log_g, stats.log_u, bracket.first, bracket.second, state.x[k], rng,
                                       config.max_rejections);
    stats.proposals += draw.proposals;
    if (draw.hit_cap) ++stats.cap_hits;
    state.x[k] = draw.accepted_value;
  }

  state.log_k = kernel.log_eval(state.x);
  ++state.iteration;
#ifndef NDEBUG
  if (!(state.log_k > stats.log_u)) throw InvalidState("single_sweep: left the slice");
#endif
  return stats;
}

ChainOutput run_asg(const LogKernel& kernel, const std::optional<std::vector<double>>& x0,
                    const ChainConfig& config) {
  config.validate();
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(clock::now() - start).count();
  };

  ChainState state = make_chain_state(kernel, x0 ? *x0 : default_initial_point(kernel, config));
  Rng rng(config.seed, config.stream);

  const std::size_t m = kernel.dim();
  const std::size_t total = config.total_iterations();
  ChainOutput out;
  out.sampler = "asg";
  out.config = config;
  out.acceptance_rate = std::numeric_limits<double>::quiet_NaN();
  out.samples.resize(static_cast<Eigen::Index>(config.n_samples), static_cast<Eigen::Index>(m));
  out.log_k_trace.reserve(total);
  out.retained_at_seconds.reserve(config.n_samples);

  std::size_t kept = 0;
  for (std::size_t t = 1; t <= total; ++t) {
    const SweepStats s = single_sweep(state, kernel, config, rng);
    out.proposals += s.proposals;
    out.cap_hits += s.cap_hits;
    out.fallback_uses += s.fallback_uses;
    out.reused_brackets += s.reused_brackets;
    out.extended_brackets += s.extended_brackets;
    out.coordinate_updates += m;
    out.log_k_trace.push_back(state.log_k);
    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0) {
      for (std::size_t j = 0; j < m; ++j) {
        out.samples(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(j)) = state.x[j];
      }
      ++kept;
      out.retained_at_seconds.push_back(elapsed());
    }
    if (config.time_limit_seconds > 0.0 && elapsed() >= config.time_limit_seconds) {
      out.stopped_on_time = t < total;
      break;
    }
  }
  if (kept < config.n_samples) out.samples.conservativeResize(static_cast<Eigen::Index>(kept), Eigen::NoChange);
  out.wall_time_seconds = elapsed();
  return out;
}

}  // namespace asg
