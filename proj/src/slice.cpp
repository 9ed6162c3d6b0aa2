#include "asg/slice.hpp"

#include <cmath>
#include <string>

#include "asg/error.hpp"

namespace asg {

double slice_height(double log_k_current, Rng& rng) {
  if (!std::isfinite(log_k_current)) {
    throw InvalidState("slice_height: current state has log K = " + std::to_string(log_k_current));
  }
  return log_k_current + std::log(rng.uniform01());
}

ExtendedBracket extend_bracket_to_slice(const std::function<double(double)>& log_g, double log_u, double a,
                                        double b, double first_step, int max_doublings) {
  if (!(a < b)) throw BracketError("extend_bracket_to_slice: empty bracket", a, b);
  if (!(first_step > 0.0)) throw InvalidArgument("extend_bracket_to_slice: first_step must be positive");
  ExtendedBracket out{a, b, 0};
  double step = first_step * (b - a);
  for (int i = 0; i < max_doublings; ++i) {
    ++out.evaluations;
    if (!(log_g(out.lower) > log_u)) break;
    out.lower -= step;
    step *= 2.0;
  }
  step = first_step * (b - a);
  for (int i = 0; i < max_doublings; ++i) {
    ++out.evaluations;
    if (!(log_g(out.upper) > log_u)) break;
    out.upper += step;
    step *= 2.0;
  }
  return out;
}

SliceDrawStats slice_1d_fixed_u(const std::function<double(double)>& log_g, double log_u, double a,
                                double b, double current, Rng& rng, std::size_t max_rejections) {
  if (!(a < b)) {
    throw BracketError("slice_1d_fixed_u: empty bracket [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]",
                       a, b);
  }
  if (!(log_g(current) > log_u)) {
    throw InvalidState("slice_1d_fixed_u: current point is not in the slice");
  }
  SliceDrawStats stats;
  const std::size_t cap = max_rejections == 0 ? 1 : max_rejections;
  while (stats.proposals < cap) {
    const double z = rng.uniform(a, b);
    ++stats.proposals;
    // Strict >: a tie (or -inf == -inf) is a rejection.
    if (log_g(z) > log_u) {
      stats.accepted_value = z;
      return stats;
    }
  }
  stats.accepted_value = current;
  stats.hit_cap = true;
  return stats;
}

}  // namespace asg
