#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace comjac {

/// Deterministic per-task random stream: a standard-pinned mt19937_64 engine
/// plus hand-rolled double conversion, so identical seeds give identical
/// sequences on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  /// Mixes (master, a, b) into an independent stream seed (splitmix64 chain).
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

  std::uint64_t seed() const { return seed_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform in the closed ball of the given radius (rejection from the cube).
  std::array<double, 3> in_ball(double radius);
  /// Uniform direction on the unit sphere (rejection, then normalization).
  std::array<double, 3> on_sphere();

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace comjac
