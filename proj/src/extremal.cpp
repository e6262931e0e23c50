#include "ulc/extremal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ulc/numeric.hpp"

namespace ulc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_family_range(int k, int l, const char* who) {
  if (k < 0 || l < k) {
    throw std::invalid_argument(std::string(who) + ": need 0 <= k <= l");
  }
}

double series_mean(const TruncExpSeries& ev, double x) { return x * ev.s1 / ev.s0; }

double series_psi(const TruncExpSeries& ev) {
  return ev.s1 > 0.0 ? std::log(ev.s0) - std::log(ev.s1) : kInf;
}

}  // namespace

double TruncExpSeries::log_f() const { return log_scale + std::log(s0); }

TruncExpSeries eval_family_series(int k, int l, double x) {
  check_family_range(k, l, "eval_family_series");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("eval_family_series: x must be positive and finite");
  }
  const double lx = std::log(x);
  double top = -kInf;
  for (int i = k; i <= l; ++i) {
    top = std::max(top, i * lx - log_factorial(i));
  }

  TruncExpSeries ev;
  ev.log_scale = top;
  KahanSum s0, s1, s2;
  for (int i = k; i <= l; ++i) {
    const double t = std::exp(i * lx - log_factorial(i) - top);
    s0.add(t);
    if (i >= 1) s1.add(t * (i / x));
    if (i >= 2) s2.add(t * (i / x) * ((i - 1) / x));
  }
  ev.s0 = s0.value();
  ev.s1 = s1.value();
  ev.s2 = s2.value();
  return ev;
}

Pmf family_pmf(int k, int l, double x) {
  const TruncExpSeries ev = eval_family_series(k, l, x);
  const double lx = std::log(x);
  Eigen::ArrayXd w(l - k + 1);
  for (int n = k; n <= l; ++n) {
    w[n - k] = std::exp(n * lx - log_factorial(n) - ev.log_scale) / ev.s0;
  }
  return Pmf::from_values(Seq(k, std::move(w)));
}

FamilyProfile family_profile(int k, int l, double x) {
  check_family_range(k, l, "family_profile");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("family_profile: x must be positive and finite");
  }
  const TruncExpSeries ev = eval_family_series(k, l, x);
  const double scale = std::exp(ev.log_scale);

  FamilyProfile out;
  out.f = ev.s0 * scale;
  out.f_prime = ev.s1 * scale;
  out.f_double_prime = ev.s2 * scale;

  // claim1 and f^2 carry two scale factors; multiply them back in one at a
  // time so intermediate magnitudes stay representable.
  const double claim1_scaled = x * (ev.s0 * ev.s2 - ev.s1 * ev.s1) + ev.s0 * ev.s1;
  out.claim1 = (claim1_scaled * scale) * scale;

  if (k == l) {
    out.mean = static_cast<double>(k);
    if (k == 0) {
      // f = 1: the degenerate constant family.
      out.psi = kInf;
      out.h = 0.0;
      out.h_prime = 0.0;
      return out;
    }
    out.psi = std::log(x / k);
    out.h = k - k * std::log(static_cast<double>(k)) + log_factorial(k);
    out.h_prime = out.psi * claim1_scaled / (ev.s0 * ev.s0);
    return out;
  }

  const double r = ev.s1 / ev.s0;  // f'/f
  out.mean = x * r;
  out.psi = -std::log(r);
  out.h = x * r * (1.0 - std::log(r)) - ev.log_f();
  out.h_prime = out.psi * claim1_scaled / (ev.s0 * ev.s0);
  return out;
}

FamilyProfile family_profile(const TruncExpFamily& fam) {
  return family_profile(fam.k, fam.l, fam.x);
}

double solve_mean(int k, int l, int n0) {
  check_family_range(k, l, "solve_mean");
  if (n0 < k || n0 > l) {
    throw std::domain_error("solve_mean: infeasible, mean " + std::to_string(n0) +
                            " outside [" + std::to_string(k) + ", " + std::to_string(l) + "]");
  }
  if (n0 == k || n0 == l) {
    throw std::domain_error(
        "solve_mean: boundary mean, the constrained family degenerates to the "
        "point mass at " + std::to_string(n0));
  }
  const double target = static_cast<double>(n0);
  const double tol = kMeanResidualRelTol * std::max(1.0, target);
  return bisect_increasing_logx(
      std::max(1.0, target),
      target,
      [&](double x) { return series_mean(eval_family_series(k, l, x), x); },
      [&](double m) { return std::abs(m - target) <= tol; });
}

ExtremalResult minimize_prob_at_mean(int n0, int L) {
  if (n0 < 1 || n0 > L) {
    throw std::invalid_argument("minimize_prob_at_mean: need 1 <= n0 <= L");
  }
  ExtremalResult res;
  res.n0 = n0;
  res.L = L;
  res.poisson_prob = poisson_pmf(static_cast<double>(n0), n0);

  // Boundary pairs all degenerate to the point mass at n0; record it once
  // under its canonical family (n0, n0, x = n0).
  res.best_k = n0;
  res.best_l = n0;
  res.best_x = static_cast<double>(n0);
  res.min_prob = 1.0;

  const double log_n0_fact = log_factorial(n0);
  for (int k = 0; k <= n0; ++k) {
    for (int l = n0; l <= L; ++l) {
      if (k == n0 || l == n0) continue;
      const double x0 = solve_mean(k, l, n0);
      const TruncExpSeries ev = eval_family_series(k, l, x0);
      const double prob = std::exp(n0 * std::log(x0) - log_n0_fact - ev.log_f());
      if (prob < res.min_prob) {
        res.min_prob = prob;
        res.best_k = k;
        res.best_l = l;
        res.best_x = x0;
      }
    }
  }
  res.gap = res.min_prob - res.poisson_prob;
  return res;
}

double find_psi_zero(int k, int l) {
  check_family_range(k, l, "find_psi_zero");
  if (k == 0 && l == 0) {
    throw std::domain_error("find_psi_zero: constant family f = 1 has no zero of psi");
  }
  if (k == 0) return 0.0;             // f(0) = f'(0) = 1
  if (k == l) return static_cast<double>(k);  // psi = log(x/k)

  // psi is increasing with psi(y0) = 0 and y0 in (k, l); accept once the
  // relative residual |f - f'|/f = |expm1(-psi)| is small enough.
  return bisect_increasing_logx(
      static_cast<double>(k),
      0.0,
      [&](double x) { return series_psi(eval_family_series(k, l, x)); },
      [&](double psi) { return std::abs(std::expm1(-psi)) <= kPsiResidualRelTol; });
}

HVerifyReport verify_h_nonneg(int k, int l, int grid) {
  if (grid < 3) throw std::invalid_argument("verify_h_nonneg: grid must have >= 3 points");
  const double y0 = find_psi_zero(k, l);  // rejects the constant family

  HVerifyReport rep;
  rep.k = k;
  rep.l = l;
  rep.y0 = y0;
  // At the zero of psi, f(y0) = f'(y0) collapses h to y0 - log f(y0);
  // y0 = 0 only happens for k = 0 where f(0) = 1 exactly.
  rep.h_at_y0 = y0 > 0.0 ? y0 - eval_family_series(k, l, y0).log_f() : 0.0;

  const double lo = std::max(1e-6, y0 / 1e3);
  const double hi = y0 * 1e3 + 1.0;
  const double step = (std::log(hi) - std::log(lo)) / (grid - 1);
  rep.grid_min_h = kInf;
  for (int j = 0; j < grid; ++j) {
    const double x = std::exp(std::log(lo) + j * step);
    const double h = family_profile(k, l, x).h;
    if (h < rep.grid_min_h) {
      rep.grid_min_h = h;
      rep.grid_argmin_x = x;
    }
  }
  rep.grid_margin = rep.grid_min_h - rep.h_at_y0;

  const bool grid_ok = rep.grid_margin >= -kHGridMarginTol;
  const bool min_ok = rep.h_at_y0 >= -kHMinTol;
  // e^{y0} >= f(y0) (1 - tol), compared in log space.
  const double log_f_y0 = y0 > 0.0 ? eval_family_series(k, l, y0).log_f() : 0.0;
  const bool exp_ok = y0 >= log_f_y0 + std::log1p(-kExpBoundRelTol);
  rep.passed = grid_ok && min_ok && exp_ok;
  return rep;
}

}  // namespace ulc
