#pragma once

#include <cstdint>
#include <optional>

#include "ulc/seqcore.hpp"

namespace ulc {

// Slack allowed when comparing an observed mu(n0) against the Poisson value.
inline constexpr double kPoissonBoundSlackTol = 1e-10;
// Slack for the convex-domination and entropy comparisons.
inline constexpr double kDominationTol = 1e-8;
// Relative log-concavity slack accepted from convolution closure checks.
inline constexpr double kClosureMarginTol = 1e-10;
// Poisson comparison distributions are truncated where the tail drops
// below this mass.
inline constexpr double kPoissonTailBound = 1e-14;

// Draws a random member of the Poisson-relative ultra-log-concave class on a
// random sub-interval of [0, L]: a convex potential V built from a symmetric
// base slope (uniform on (-1.5, 1.5)) and nonnegative slope increments (zero
// with probability 1/2, else exponential with rate 2) gives weights
// e^{-V(n)} / n!. Deterministic in `seed`.
Pmf sample_ulc(int L, std::uint64_t seed);

// Same construction relative to the binomial: weights C(n,k) e^{-W(k)} on a
// random sub-interval of [0, n].
Pmf sample_ulc_finite(int n, std::uint64_t seed);

// Tilts mu so its mean hits the integer n0 exactly (residual
// 1e-12 * max(1, n0)), using the strict monotonicity of the tilted mean.
// n0 must lie strictly inside the support interval.
Pmf tilt_to_mean(const Pmf& mu, int n0);

struct TrialConfig {
  int n0 = 1;
  int L = 2;
  int trials = 1;
  std::uint64_t seed = 0;
};

struct TrialReport {
  int violations = 0;
  // min over evaluated trials of the tilted mu(n0); +inf when none evaluated.
  double min_observed_prob = 0.0;
  // min over evaluated trials of mu(n0) - poisson_pmf(n0, n0).
  double min_gap = 0.0;
  std::optional<std::uint64_t> worst_seed;  // per-trial seed of the min gap
  std::optional<Pmf> worst_pmf;             // the tilted pmf of that trial
  int evaluated = 0;
  int skipped = 0;
};

// Runs cfg.trials independent trials: sample_ulc with per-trial seed
// derive_seed(cfg.seed, trial), skip samples whose support does not strictly
// contain n0, tilt the rest to mean n0 and compare mu(n0) against the
// Poisson value. Trials are distributed over `threads` workers and reduced
// in trial order, so the report does not depend on the thread count.
TrialReport run_theorem_trials(const TrialConfig& cfg, int threads = 1);

struct SubSuiteReport {
  int cases = 0;
  int failures = 0;
  // Most adverse slack observed (margin above the failure line).
  double worst_margin = 0.0;
};

struct PropertySuiteReport {
  SubSuiteReport closure;      // ULC(n) * ULC(m) -> ULC(n+m) under convolution
  SubSuiteReport domination;   // E phi(X) <= E phi(Z) for convex phi
  SubSuiteReport entropy;      // H(X) <= H(Z)

  bool all_passed() const {
    return closure.failures == 0 && domination.failures == 0 && entropy.failures == 0;
  }
};

// Seeded property checks of the classical facts about the class: convolution
// closure (on pairs from ULC(n) x ULC(m), n, m <= min(L, 10)), convex
// domination against the mean-matched Poisson for phi in
// {x^2, e^{x/2}, |x - mean|}, and the entropy bound. Domination and entropy
// share the same sampled pmfs.
PropertySuiteReport property_suite(int L, int cases, std::uint64_t seed);

}  // namespace ulc
