#pragma once

#include <cstdint>
#include <vector>

#include "ulc/seqcore.hpp"

namespace ulc {

// Absolute convexity slack allowed in a potential: V(n+1)+V(n-1) >= 2V(n) - tol.
inline constexpr double kPotentialConvexityTol = 1e-10;
// Two slopes within this of each other count as one linear piece.
inline constexpr double kSlopeTol = 1e-9;
// Relative singular-value cutoff for basis independence, after normalizing
// each direction to unit max entry.
inline constexpr double kRankThreshold = 1e-8;
// The certification search halves epsilon at most this many times from 1.
inline constexpr int kMaxEpsilonHalvings = 60;
// Feasibility slack for constraint sets, relative to max(1, |target|).
inline constexpr double kFeasibilityRelTol = 1e-9;

// V(n) = -log p(n) on the carrier of a strictly positive log-concave p;
// convex as a sequence within kPotentialConvexityTol.
struct Potential {
  Seq seq;
};

// Builds the potential of a strictly positive sequence, rejecting inputs
// whose potential is not convex within tolerance.
Potential potential_of(const Seq& p);

// First differences V'(n) = V(n+1) - V(n); non-decreasing for convex V.
struct SlopeSeq {
  Seq seq;
};

SlopeSeq slope_sequence(const Potential& V);

// Indices n0 < n1 < ... where the slope first strictly exceeds (by more than
// tol) its value at the previous breakpoint; n0 is the first support index.
// The count equals the number of distinct slope values.
std::vector<int> breakpoints(const Potential& V, double tol = kSlopeTol);

struct PerturbationBasis {
  std::vector<Seq> directions;
  bool reflected = false;
};

// The perturbation directions of the degrees-of-freedom construction: p
// itself (= e^{-V} * 1) and e^{-V} * V_i for each breakpoint, where V_i
// follows V up to the i-th breakpoint and continues linearly after it.
// When V'(n0) is zero within kSlopeTol the construction runs on the
// index-reversed sequence and the directions are reversed back; a fully
// constant V falls back to {p, p * n}. Requires strictly positive p.
PerturbationBasis perturbation_basis(const Seq& p);

// Rank of the direction set at kRankThreshold, after normalizing each
// direction to unit max entry.
int numerical_rank(const std::vector<Seq>& directions, double threshold = kRankThreshold);

struct DofCertificate {
  std::vector<Seq> basis;
  double epsilon = 0.0;
  int trials_checked = 0;
  bool reflected = false;
};

// Constructive evidence that p has at least basis-size degrees of freedom:
// verifies the basis is numerically independent, then finds an epsilon
// (starting at 1, halving at most kMaxEpsilonHalvings times) such that
// `samples` seeded draws of delta from (-eps, eps)^b all leave
// p + sum delta_j q_j log-concave. Per-trial sub-seeds derive from
// (seed, halving attempt, trial index) via derive_seed, so trials are
// reproducible and order-independent. Throws std::domain_error when no
// epsilon >= 2^-60 works.
DofCertificate certify_dof(const Seq& p, int samples, std::uint64_t seed);

// Linear constraints <p, v_i> = a_i over a common carrier interval.
struct ConstraintSet {
  std::vector<Seq> vectors;
  std::vector<double> targets;
};

// True when the certified basis size is at most the number of constraints,
// i.e. p survives the extreme-point filter. p must be feasible within
// kFeasibilityRelTol; the basis is built on the positive support of p.
bool is_extreme_candidate(const Seq& p, const ConstraintSet& c);

}  // namespace ulc
