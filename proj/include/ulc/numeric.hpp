#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ulc {

// Kahan-compensated accumulator for long sums of doubles.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_choose(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Bisection on log x for an increasing function `value`, stopping once
// `done(value(mid))` holds. Brackets expand geometrically from `start`.
template <typename ValueFn, typename DoneFn>
double bisect_increasing_logx(double start, double target, ValueFn&& value, DoneFn&& done) {
  double lo = start, hi = start;
  for (int i = 0; value(lo) >= target; ++i) {
    if (i > 4000) throw std::runtime_error("bisection: lower bracket search failed");
    lo *= 0.5;
  }
  for (int i = 0; value(hi) <= target; ++i) {
    if (i > 4000) throw std::runtime_error("bisection: upper bracket search failed");
    hi *= 2.0;
  }
  double mid = std::sqrt(lo * hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = std::sqrt(lo * hi);
    const double v = value(mid);
    if (done(v)) return mid;
    (v < target ? lo : hi) = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
  }
  if (!done(value(mid))) {
    throw std::runtime_error("bisection: bracket collapsed before reaching tolerance");
  }
  return mid;
}

// splitmix64 step; used to derive independent sub-seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for trial `index` of a run keyed by `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

}  // namespace ulc
