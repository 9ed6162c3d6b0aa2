#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace asg {

/// xoshiro256++ with splitmix64 seeding.
///
/// Stream k of a seed is the base generator advanced by k jumps of 2^128
/// draws, so streams never overlap for any practical run length. Satisfies
/// std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via the Marsaglia polar method.
  double normal();

  void jump();

  const std::array<std::uint64_t, 4>& state() const { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace asg
