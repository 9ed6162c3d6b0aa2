#include "asg/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "asg/error.hpp"

namespace asg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr double kExpClamp = 700.0;

void validate(const SupportOptions& o) {
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw InvalidArgument("support: epsilon must lie in (0, 1)");
  if (!(o.s0 > 0.0) || !std::isfinite(o.s0)) throw InvalidArgument("support: s0 must be positive");
  const auto [lo, hi] = o.fallback_range;
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw InvalidArgument("support: fallback_range must be a finite interval lo < hi");
  }
  if (o.grid_points < 3) throw InvalidArgument("support: grid_points must be at least 3");
  if (!(o.grid_threshold > 0.0 && o.grid_threshold < 1.0)) {
    throw InvalidArgument("support: grid_threshold must lie in (0, 1)");
  }
}

bool usable_warm(const SupportOptions& o) {
  return o.warm_start && std::isfinite(o.warm_start->first) && std::isfinite(o.warm_start->second) &&
         o.warm_start->first < o.warm_start->second;
}

// u-positions where the transformed integrand switches between exactly zero
// and a value that matters at the scale of the current integral.
template <class F>
std::vector<double> find_edges(const numerics::QuadPartition& part, const F& kstar) {
  std::vector<double> edges;
  const auto& segs = part.segments;
  const double scale = std::abs(part.result.value);
  if (!(scale > 0.0) || !std::isfinite(scale)) return edges;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const auto& a = segs[i];
    const auto& b = segs[i + 1];
    const bool a_zero = a.value == 0.0;
    const bool b_zero = b.value == 0.0;
    if (a_zero == b_zero) continue;
    const auto& live = a_zero ? b : a;
    const auto live_nodes = numerics::gauss_kronrod15_nodes(live.lo, live.hi);
    const auto dead_nodes = numerics::gauss_kronrod15_nodes(a_zero ? a.lo : b.lo, a_zero ? a.hi : b.hi);
    // Nearest non-zero node of the live panel, scanning away from the shared end.
    double in = 0.0;
    double in_value = 0.0;
    for (std::size_t k = 0; k < 15; ++k) {
      const double u = live_nodes[a_zero ? k : 14 - k];
      in_value = kstar(u);
      if (in_value > 0.0) {
        in = u;
        break;
      }
    }
    if (!(in_value > 0.0)) continue;
    if (in_value * (live.hi - live.lo) <= 1e-12 * scale) continue;  // underflowing tail
    double out = a_zero ? dead_nodes[14] : dead_nodes[0];
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (in + out);
      if (!(std::abs(in - out) > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid))) break;
      if (kstar(mid) > 0.0) {
        in = mid;
      } else {
        out = mid;
      }
    }
    edges.push_back(0.5 * (in + out));
  }
  return edges;
}

struct CauchyAttempt {
  bool ok = false;
  std::string reason;
  SupportEstimate est;
};

CauchyAttempt cauchy_path(const LogDensity1D& log_g, const SupportOptions& o) {
  const CauchyMap map(o.s0);
  CauchyAttempt out;
  std::size_t evals = 0;

  // Normalising shift: the largest log g seen at a few informative points
  // keeps exp() in range for kernels living far from unit scale.
  double shift = kNegInf;
  auto probe = [&](double x) {
    ++evals;
    const double v = log_g(x);
    if (std::isfinite(v)) shift = std::max(shift, v);
  };
  for (int k = 1; k < 16; ++k) probe(map.quantile(k / 16.0));
  if (o.hint && std::isfinite(*o.hint)) probe(*o.hint);
  const bool warm = usable_warm(o);
  if (warm) probe(0.5 * (o.warm_start->first + o.warm_start->second));
  if (!std::isfinite(shift)) shift = 0.0;

  std::size_t clamps = 0;
  std::size_t integrand_evals = 0;
  const auto kstar = [&](double u) {
    ++integrand_evals;
    const double x = map.quantile(u);
    const double lg = log_g(x);
    if (lg == kNegInf) return 0.0;
    double e = lg - shift - map.log_pdf(x);
    if (e > kExpClamp) {
      ++clamps;
      e = kExpClamp;
    }
    return std::exp(e);
  };

  numerics::QuadOptions q = o.quad;
  auto add_break = [&q, &map](double x) {
    if (std::isfinite(x)) q.breakpoints.push_back(map.cdf(x));
  };
  if (o.hint && std::isfinite(*o.hint)) {
    const double h = *o.hint;
    add_break(h);
    // Scale ladder around the hint so a narrow peak next to it cannot fall
    // between the Kronrod nodes of one wide panel.
    if (warm) {
      const double w = o.warm_start->second - o.warm_start->first;
      for (double s : {w / 16.0, w / 4.0, w}) {
        add_break(h - s);
        add_break(h + s);
      }
    } else {
      for (double s : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        add_break(h - s * o.s0);
        add_break(h + s * o.s0);
      }
    }
  }
  if (warm) {
    add_break(o.warm_start->first);
    add_break(o.warm_start->second);
  }

  // A jump from zero to a large (possibly singular) value can hide between
  // the outermost node of one panel and the first node of the next, losing
  // mass without raising the error estimate. Locate such edges by bisection
  // and re-integrate with them as breakpoints.
  numerics::QuadPartition part;
  for (int round = 0;; ++round) {
    part = numerics::adaptive_partition(kstar, 0.0, 1.0, q);
    if (round == 2) break;
    const auto edges = find_edges(part, kstar);
    std::size_t added = 0;
    for (double e : edges) {
      const bool known = std::any_of(q.breakpoints.begin(), q.breakpoints.end(), [e](double b) {
        return std::abs(b - e) <= 16.0 * std::numeric_limits<double>::epsilon();
      });
      if (!known) {
        q.breakpoints.push_back(e);
        ++added;
      }
    }
    if (added == 0) break;
  }
  const auto& segs = part.segments;

  double z = 0.0;
  std::vector<double> cum(segs.size() + 1, 0.0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    z += segs[i].value;
    cum[i + 1] = z;
  }

  auto fail = [&](std::string why) {
    out.reason = std::move(why);
    out.est.evaluations = evals + integrand_evals;
    return out;
  };
  if (!part.result.converged) return fail("quadrature did not converge");
  if (!std::isfinite(z)) return fail("normalising constant is not finite");
  if (!(z > 0.0)) return fail("normalising constant is not positive");
  if (static_cast<double>(clamps) > o.clamp_fraction_limit * static_cast<double>(integrand_evals)) {
    return fail("transformed integrand overflowed on " + std::to_string(clamps) + " of " +
                std::to_string(integrand_evals) + " evaluations");
  }

  // Invert F* inside the single leaf segment that contains the target mass.
  const numerics::RootOptions ropt{1e-13, 1e-11 * z, 200};
  auto solve = [&](double target) {
    const auto it = std::lower_bound(cum.begin() + 1, cum.end(), target);
    std::size_t i = static_cast<std::size_t>(std::distance(cum.begin() + 1, it));
    i = std::min(i, segs.size() - 1);
    const auto& s = segs[i];
    const double base = cum[i];
    std::size_t nf = 0;
    auto h = [&](double u) {
      if (u <= s.lo) return base - target;
      if (u >= s.hi) return cum[i + 1] - target;
      return base + numerics::gauss_kronrod15(kstar, s.lo, u, nf).value - target;
    };
    return numerics::find_root(h, s.lo, s.hi, ropt).root;
  };

  double u_a = 0.0;
  double u_b = 1.0;
  try {
    u_a = solve(0.5 * o.epsilon * z);
    u_b = solve((1.0 - 0.5 * o.epsilon) * z);
  } catch (const BracketError& e) {
    return fail(std::string("tail root: ") + e.what());
  }

  out.est.lower = map.quantile(u_a);
  out.est.upper = map.quantile(u_b);
  out.est.evaluations = evals + integrand_evals;
  if (!(out.est.lower < out.est.upper)) return fail("degenerate interval");
  out.est.log_norm_const = shift + std::log(z);
  out.est.norm_const = std::exp(out.est.log_norm_const);
  out.est.method = SupportMethod::cauchy_transform;
  out.ok = true;
  return out;
}

void eval_grid(const LogDensity1D& log_g, double lo, double hi, std::size_t n, bool parallel,
               std::vector<double>& xs, std::vector<double>& lg) {
  xs.resize(n);
  lg.resize(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + step * static_cast<double>(i);
  xs[n - 1] = hi;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double v = log_g(xs[static_cast<std::size_t>(i)]);
    lg[static_cast<std::size_t>(i)] = std::isnan(v) ? kNegInf : v;
  }
}

SupportEstimate grid_path(const LogDensity1D& log_g, const SupportOptions& o) {
  double lo = o.fallback_range.first;
  double hi = o.fallback_range.second;
  if (usable_warm(o)) {
    lo = std::min(lo, o.warm_start->first);
    hi = std::max(hi, o.warm_start->second);
  }
  const std::size_t n = o.grid_points;

  std::vector<double> xs;
  std::vector<double> lg;
  eval_grid(log_g, lo, hi, n, o.parallel_grid, xs, lg);
  const double peak = *std::max_element(lg.begin(), lg.end());
  if (!std::isfinite(peak)) {
    throw UnsupportedKernel("support: kernel is numerically zero on the whole grid [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double cut = peak + std::log(o.grid_threshold);
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lg[i] > cut) {
      first = std::min(first, i);
      last = i;
    }
  }
  // One extra cell on each side keeps the mass that sits between the last
  // kept node and the true edge.
  const std::size_t i0 = first > 0 ? first - 1 : 0;
  const std::size_t i1 = std::min(last + 1, n - 1);

  // Re-grid the active range at full resolution before integrating.
  std::vector<double> fx;
  std::vector<double> flg;
  eval_grid(log_g, xs[i0], xs[i1], n, o.parallel_grid, fx, flg);
  const double fpeak = std::max(peak, *std::max_element(flg.begin(), flg.end()));
  std::vector<double> cdf(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double w0 = std::exp(flg[i - 1] - fpeak);
    const double w1 = std::exp(flg[i] - fpeak);
    cdf[i] = cdf[i - 1] + 0.5 * (w0 + w1) * (fx[i] - fx[i - 1]);
  }
  const double total = cdf.back();

  auto dump = [&](const std::string& what) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "support: " << what << "; F at probes:";
    for (int k = 0; k <= 10; ++k) {
      const std::size_t idx = (n - 1) * static_cast<std::size_t>(k) / 10;
      msg << " F(" << fx[idx] << ")=" << (total > 0.0 ? cdf[idx] / total : 0.0);
    }
    return msg.str();
  };
  if (!(total > 0.0) || !std::isfinite(total)) throw SupportError(dump("grid mass is not positive"));

  auto interp = [&](double x) {
    if (x <= fx.front()) return 0.0;
    if (x >= fx.back()) return 1.0;
    const auto it = std::upper_bound(fx.begin(), fx.end(), x);
    const auto j = static_cast<std::size_t>(it - fx.begin());
    const double t = (x - fx[j - 1]) / (fx[j] - fx[j - 1]);
    return (cdf[j - 1] + t * (cdf[j] - cdf[j - 1])) / total;
  };

  SupportEstimate est;
  const numerics::RootOptions ropt{1e-12, 1e-12, 200};
  try {
    est.lower = numerics::find_root([&](double x) { return interp(x) - 0.5 * o.epsilon; },
                                    fx.front(), fx.back(), ropt)
                    .root;
    est.upper = numerics::find_root([&](double x) { return interp(x) - (1.0 - 0.5 * o.epsilon); },
                                    fx.front(), fx.back(), ropt)
                    .root;
  } catch (const BracketError& e) {
    throw SupportError(dump(std::string("tail root failed (") + e.what() + ")"));
  }
  if (!(est.lower < est.upper)) throw SupportError(dump("degenerate interval"));
  est.log_norm_const = fpeak + std::log(total);
  est.norm_const = std::exp(est.log_norm_const);
  est.method = SupportMethod::grid_fallback;
  est.evaluations = 2 * n;
  return est;
}

}  // namespace

CauchyMap::CauchyMap(double s0) : s0_(s0) {
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw InvalidArgument("CauchyMap: s0 must be positive");
}

double CauchyMap::cdf(double x) const { return 0.5 + std::atan(x / s0_) / kPi; }

double CauchyMap::pdf(double x) const { return s0_ / (kPi * (s0_ * s0_ + x * x)); }

double CauchyMap::log_pdf(double x) const {
  const double ax = std::abs(x);
  if (ax > s0_) {
    const double r = s0_ / ax;
    return std::log(s0_ / kPi) - 2.0 * std::log(ax) - std::log1p(r * r);
  }
  return std::log(s0_ / kPi) - std::log(s0_ * s0_ + x * x);
}

double CauchyMap::quantile(double u) const {
  u = std::clamp(u, kClamp, 1.0 - kClamp);
  // s0 tan(pi (u - 1/2)) rewritten so that the tail being resolved never
  // passes through the cancellation in (u - 1/2).
  if (u > 0.5) return s0_ / std::tan(kPi * (1.0 - u));
  if (u < 0.5) return -s0_ / std::tan(kPi * u);
  return 0.0;
}

const char* to_string(SupportMethod m) {
  return m == SupportMethod::cauchy_transform ? "cauchy_transform" : "grid_fallback";
}

SupportEstimate effective_support_1d(const LogDensity1D& log_g, const SupportOptions& opts) {
  validate(opts);
  SupportEstimate est;
  std::string reason;
  std::size_t cauchy_evals = 0;
  if (opts.path != SupportPath::grid_only) {
    auto attempt = cauchy_path(log_g, opts);
    if (attempt.ok) {
      attempt.est.epsilon = opts.epsilon;
      attempt.est.s0 = opts.s0;
      return attempt.est;
    }
    if (opts.path == SupportPath::cauchy_only) {
      throw SupportError("support: Cauchy path failed: " + attempt.reason);
    }
    reason = attempt.reason;
    cauchy_evals = attempt.est.evaluations;
  } else {
    reason = "grid path forced";
  }
  est = grid_path(log_g, opts);
  est.fallback_reason = reason;
  est.evaluations += cauchy_evals;
  est.epsilon = opts.epsilon;
  est.s0 = opts.s0;
  return est;
}

SupportEstimate effective_support_1d(const Conditional1D& g, const SupportOptions& opts) {
  return effective_support_1d(LogDensity1D([&g](double z) { return g(z); }), opts);
}

SupportEstimate effective_support_1d(const LogKernel& kernel, const SupportOptions& opts) {
  if (kernel.dim() != 1) throw InvalidArgument("support: kernel must be one-dimensional");
  return effective_support_1d(LogDensity1D([&kernel](double z) {
                                return kernel.log_eval(std::span<const double>(&z, 1));
                              }),
                              opts);
}

}  // namespace asg
