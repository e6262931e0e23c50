#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ulc {

// Seeded random stream with explicit inverse-transform draws. The engine is
// std::mt19937_64 (bit-exact by the standard); the transforms are written out
// rather than taken from <random> distributions, whose output is
// implementation-defined, so that equal seeds give identical streams on every
// platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Symmetric draw from (-half_width, half_width).
  double symmetric(double half_width) {
    return uniform(-half_width, half_width);
  }

  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

  // Uniform integer in [lo, hi] inclusive (hi - lo assumed small).
  int uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int draw = static_cast<int>(engine_() % static_cast<std::uint64_t>(span));
    return lo + draw;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ulc
