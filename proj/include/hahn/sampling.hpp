#pragma once

// Seeded sampler for every stochastic check in the library. Bit-reproducible
// across platforms: std::mt19937_64 output is fully specified and the
// conversion to doubles is done by hand (the standard distributions are not).

#include "hahn/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace hahn {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed ^ 0x9E3779B97F4A7C15ull) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Area-uniform point in the disc |z| < radius.
  Complex disc_point(double radius) {
    const double rho = radius * std::sqrt(uniform());
    return std::polar(rho, 2 * std::numbers::pi * uniform());
  }

  /// Point in the square [-half, half]^2.
  Complex box_point(double half) { return {uniform(-half, half), uniform(-half, half)}; }

  /// Independent stream derived from this one (for per-item sub-sampling).
  Sampler split() { return Sampler(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hahn
