#pragma once

#include <cstdint>
#include <random>

namespace apollo {

// Deterministic helper around mt19937_64. Uniform doubles are derived from the
// raw 64-bit stream directly (not through std distributions, whose output is
// implementation defined), so identical seeds give identical values everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Magnitude uniform in [lo, hi], sign chosen by a coin flip.
  double signed_uniform(double lo, double hi) {
    double mag = uniform(lo, hi);
    return (eng_() & 1u) ? mag : -mag;
  }

  int index(int count) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(count)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace apollo
