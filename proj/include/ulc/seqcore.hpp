#pragma once

#include <Eigen/Dense>

#include <optional>

namespace ulc {

// Inclusive interval of integer indices.
struct DiscreteInterval {
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo + 1; }
  bool contains(int n) const { return n >= lo && n <= hi; }
  bool operator==(const DiscreteInterval&) const = default;
};

// A finite real sequence anchored at an integer offset: values()[j] holds the
// entry at absolute index offset()+j. This is the shared carrier for weights,
// pmfs, potentials and perturbation directions. Entries must be finite.
class Seq {
 public:
  Seq(int offset, Eigen::ArrayXd values);

  int offset() const { return offset_; }
  int lo() const { return offset_; }
  int hi() const { return offset_ + static_cast<int>(values_.size()) - 1; }
  Eigen::Index size() const { return values_.size(); }
  DiscreteInterval carrier() const { return {lo(), hi()}; }

  const Eigen::ArrayXd& values() const { return values_; }

  // Entry at absolute index n; zero outside the carrier.
  double at(int n) const {
    return carrier().contains(n) ? values_[n - offset_] : 0.0;
  }
  double operator[](Eigen::Index j) const { return values_[j]; }

  // Same carrier, values in reverse index order.
  Seq reversed() const;

 private:
  int offset_;
  Eigen::ArrayXd values_;
};

// Relative tolerance for the discrete log-concavity test p(n)^2 >= p(n+1)p(n-1).
inline constexpr double kLogConcavityRelTol = 1e-12;
// Pmf construction accepts value arrays whose sum is within this of 1.
inline constexpr double kPmfSumTol = 1e-9;

struct LogConcavityReport {
  bool is_log_concave = false;
  // Absolute index of the worst interior margin (or of the gap that broke
  // support contiguity); empty when there is no interior point.
  std::optional<int> worst_index;
  // min over interior n of (p(n)^2 - p(n+1)p(n-1)) / p(n)^2. +inf when there
  // is no interior point, -inf when the support has an interior gap.
  double worst_margin = 0.0;
};

// Checks that the positive entries of s form a contiguous block and that
// p(n)^2 >= p(n+1)p(n-1) holds (relatively, within kLogConcavityRelTol) at
// every interior point of that block. Comparisons run in log space; edge
// zeros make the neighbouring product vanish and need no check. Throws
// std::invalid_argument on negative entries.
LogConcavityReport validate_log_concave(const Seq& s);

// A normalized nonnegative sequence whose positive entries form a contiguous
// block. Logs of entries are cached at construction (-inf at zeros).
class Pmf {
 public:
  // Strict construction for external data: requires |sum - 1| <= kPmfSumTol,
  // then renormalizes exactly.
  static Pmf from_values(const Seq& s);
  // Normalizes arbitrary nonnegative weights with positive sum.
  static Pmf from_weights(const Seq& s);

  const Seq& seq() const { return seq_; }
  DiscreteInterval support() const { return {support_lo_, support_hi_}; }
  double at(int n) const { return seq_.at(n); }
  // log of the entry at absolute index n; -inf outside the support.
  double log_at(int n) const;
  const Eigen::ArrayXd& log_values() const { return logs_; }

  double mean() const;
  double entropy() const;  // Shannon entropy in nats, 0 log 0 = 0

 private:
  Pmf(Seq s, Eigen::ArrayXd logs, int support_lo, int support_hi);

  Seq seq_;
  Eigen::ArrayXd logs_;
  int support_lo_;
  int support_hi_;
};

// Ultra-log-concavity relative to Binomial(n, p): log-concavity of
// mu(k) / C(n,k) on [0, n]. The support of mu must lie in [0, n].
LogConcavityReport ulc_finite_report(const Pmf& mu, int n);
bool is_ulc_finite(const Pmf& mu, int n);

// Ultra-log-concavity relative to the Poisson family: log-concavity of
// mu(n) * n!. Requires a nonnegative carrier.
LogConcavityReport ulc_inf_report(const Pmf& mu);
bool is_ulc_inf(const Pmf& mu);

// Reference pmf values, computed in log space. poisson_pmf requires
// lambda > 0 and at >= 0; binomial_pmf requires p in (0,1) and 0 <= at <= n.
double poisson_pmf(double lambda, int at);
double binomial_pmf(int n, double p, int at);

// Poisson(lambda) restricted to [0, L] and renormalized.
Pmf poisson_truncated(double lambda, int L);
// The full Binomial(n, p) pmf on [0, n].
Pmf binomial(int n, double p);
// Smallest N such that the Poisson(lambda) mass beyond N is < tail_bound.
int poisson_truncation_point(double lambda, double tail_bound);

double mean(const Pmf& mu);
double entropy(const Pmf& mu);

// Distribution of the sum of independent variables; offsets add and the
// length is len(a)+len(b)-1.
Pmf convolve(const Pmf& a, const Pmf& b);

// Exponential tilting: pmf proportional to mu(n) * theta^n on the same
// carrier. Computed in log space, so large theta^n cannot overflow.
Pmf tilt(const Pmf& mu, double theta);

}  // namespace ulc
