#pragma once

#include "ulc/seqcore.hpp"

namespace ulc {

// Residual targets for the two bisection solvers and for the h profile.
inline constexpr double kMeanResidualRelTol = 1e-12;
inline constexpr double kPsiResidualRelTol = 1e-10;
inline constexpr double kHGridMarginTol = 1e-10;
inline constexpr double kHMinTol = 1e-12;
inline constexpr double kExpBoundRelTol = 1e-12;

// The extreme-point family: mu(n) = x^n / (n! f(x)) on [k, l] with
// f(x) = sum_{i=k}^{l} x^i / i!.
struct TruncExpFamily {
  int k = 0;
  int l = 0;
  double x = 1.0;
};

// f, f', f'' evaluated with all terms divided by the largest series term
// exp(log_scale); the scaled sums stay O(l - k + 2) however wide the inputs
// range.
struct TruncExpSeries {
  double s0 = 0.0;  // f  * exp(-log_scale)
  double s1 = 0.0;  // f' * exp(-log_scale)
  double s2 = 0.0;  // f''* exp(-log_scale)
  double log_scale = 0.0;

  double log_f() const;
};

TruncExpSeries eval_family_series(int k, int l, double x);

// The pmf of the family member (normalizes exactly by construction).
Pmf family_pmf(int k, int l, double x);

struct FamilyProfile {
  double f = 0.0;
  double f_prime = 0.0;
  double f_double_prime = 0.0;
  double mean = 0.0;     // x f'(x) / f(x), in [k, l]
  double h = 0.0;        // x r (1 - log r) - log f,  r = f'/f
  double h_prime = 0.0;  // psi * claim1 / f^2
  double psi = 0.0;      // -log(f'/f)
  double claim1 = 0.0;   // -x f'^2 + x f f'' + f f'
};

// Evaluates the analytic quantities behind the extremal argument at one
// point of one family. Requires 0 <= k <= l and x > 0. For k == l the mean
// is exactly k and h is the constant k - k log k + log k!.
FamilyProfile family_profile(int k, int l, double x);
FamilyProfile family_profile(const TruncExpFamily& fam);

// Solves x f'(x)/f(x) = n0 by bisection on log x with bracket expansion;
// the mean is strictly increasing in x for k < l. Requires k < n0 < l
// strictly: n0 == k or n0 == l is a point-mass limit (throws
// std::domain_error, "boundary"), n0 outside [k, l] is infeasible (throws
// std::domain_error, "infeasible").
double solve_mean(int k, int l, int n0);

struct ExtremalResult {
  int n0 = 0;
  int L = 0;
  int best_k = 0;
  int best_l = 0;
  double best_x = 0.0;
  double min_prob = 1.0;
  double poisson_prob = 0.0;
  double gap = 0.0;  // min_prob - poisson_prob
};

// Minimizes mu(n0) over the extreme-point families with support in [0, L]
// and mean n0: enumerates 0 <= k <= n0 <= l <= L, solves the mean equation
// on strict interior pairs and evaluates mu(n0) there. Boundary pairs
// (k == n0 or l == n0) degenerate to the point mass at n0 with value 1 and
// are represented by the canonical triple (n0, n0, x = n0). Ties break to
// the lexicographically smallest (k, l).
ExtremalResult minimize_prob_at_mean(int n0, int L);

// The unique zero y0 of psi(x) = -log(f'(x)/f(x)) on [0, inf): 0 when k = 0,
// k when k = l >= 1, otherwise located by bisection (psi is increasing) to
// residual |f(y0) - f'(y0)| <= kPsiResidualRelTol * f(y0). The constant
// family k = l = 0 is degenerate and throws std::domain_error.
double find_psi_zero(int k, int l);

struct HVerifyReport {
  int k = 0;
  int l = 0;
  double y0 = 0.0;
  double h_at_y0 = 0.0;      // y0 - log f(y0)
  double grid_min_h = 0.0;
  double grid_argmin_x = 0.0;
  double grid_margin = 0.0;  // grid_min_h - h_at_y0
  bool passed = false;
};

// Checks h >= h(y0) on a log-spaced grid of `grid` points spanning
// [max(1e-6, y0/1e3), y0*1e3 + 1], h(y0) >= -kHMinTol, and
// e^{y0} >= f(y0) (1 - kExpBoundRelTol). Requires grid >= 3 and a
// non-constant family.
HVerifyReport verify_h_nonneg(int k, int l, int grid);

}  // namespace ulc
