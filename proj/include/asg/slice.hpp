#pragma once

#include <cstddef>
#include <functional>

#include "asg/rng.hpp"

namespace asg {

struct SliceDrawStats {
  std::size_t proposals = 0;
  double accepted_value = 0.0;
  bool hit_cap = false;
};

/// log u = log_k_current + log V with V ~ U(0, 1). Throws InvalidState if
/// log_k_current is not finite.
double slice_height(double log_k_current, Rng& rng);

struct ExtendedBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t evaluations = 0;
};

/// Pushes each end of [a, b] outward, doubling the step (first step
/// first_step * (b - a)), until log_g there is <= log_u or max_doublings
/// steps were taken. Slices of unimodal conditionals then lie inside the
/// returned interval. Ends already outside the slice are left alone. A small
/// first step keeps the widening tight when the slice pokes only slightly
/// past the bracket, e.g. next to an integrable singularity.
ExtendedBracket extend_bracket_to_slice(const std::function<double(double)>& log_g, double log_u, double a,
                                        double b, double first_step = 1.0 / 64, int max_doublings = 60);

/// Rejection draw from {z in [a, b] : log_g(z) > log_u}, proposing
/// uniformly on [a, b]. After max_rejections failed proposals the incoming
/// `current` is returned with hit_cap set.
///
/// Throws BracketError if a >= b and InvalidState if `current` is not in
/// the slice (that is an upstream bug, so it is never patched over).
SliceDrawStats slice_1d_fixed_u(const std::function<double(double)>& log_g, double log_u, double a,
                                double b, double current, Rng& rng,
                                std::size_t max_rejections = 10000);

}  // namespace asg
