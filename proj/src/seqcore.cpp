#include "ulc/seqcore.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ulc/numeric.hpp"

namespace ulc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// First and last strictly positive entries, as positional indices.
// Returns {-1, -1} when every entry is zero.
std::pair<Eigen::Index, Eigen::Index> positive_range(const Eigen::ArrayXd& v) {
  Eigen::Index first = -1, last = -1;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v[j] > 0.0) {
      if (first < 0) first = j;
      last = j;
    }
  }
  return {first, last};
}

}  // namespace

Seq::Seq(int offset, Eigen::ArrayXd values) : offset_(offset), values_(std::move(values)) {
  if (values_.size() == 0) throw std::invalid_argument("Seq: values must be nonempty");
  if (!values_.isFinite().all()) throw std::invalid_argument("Seq: values must be finite");
}

Seq Seq::reversed() const {
  return Seq(offset_, values_.reverse());
}

LogConcavityReport validate_log_concave(const Seq& s) {
  const Eigen::ArrayXd& v = s.values();
  if ((v < 0.0).any()) {
    throw std::invalid_argument("validate_log_concave: sequence has a negative entry");
  }

  LogConcavityReport report;
  const auto [first, last] = positive_range(v);
  if (first < 0) {
    // All-zero sequence: no support interval at all.
    report.is_log_concave = false;
    report.worst_margin = -kInf;
    return report;
  }

  // Interior zeros break the "support is a discrete interval" requirement.
  for (Eigen::Index j = first + 1; j < last; ++j) {
    if (v[j] == 0.0) {
      report.is_log_concave = false;
      report.worst_index = s.offset() + static_cast<int>(j);
      report.worst_margin = -kInf;
      return report;
    }
  }

  // p(n)^2 >= p(n+1)p(n-1) at interior points of the support, in log space:
  // with g = 2 log p(n) - log p(n+1) - log p(n-1), the relative margin
  // (p(n)^2 - p(n+1)p(n-1)) / p(n)^2 equals -expm1(-g).
  double worst = kInf;
  std::optional<int> worst_index;
  for (Eigen::Index j = first + 1; j < last; ++j) {
    const double g = 2.0 * std::log(v[j]) - std::log(v[j + 1]) - std::log(v[j - 1]);
    const double margin = -std::expm1(-g);
    if (margin < worst) {
      worst = margin;
      worst_index = s.offset() + static_cast<int>(j);
    }
  }
  report.worst_margin = worst;
  report.worst_index = worst_index;
  report.is_log_concave = worst >= -kLogConcavityRelTol;
  return report;
}

Pmf::Pmf(Seq s, Eigen::ArrayXd logs, int support_lo, int support_hi)
    : seq_(std::move(s)), logs_(std::move(logs)), support_lo_(support_lo), support_hi_(support_hi) {}

Pmf Pmf::from_values(const Seq& s) {
  KahanSum sum;
  for (Eigen::Index j = 0; j < s.size(); ++j) sum.add(s[j]);
  if (std::abs(sum.value() - 1.0) > kPmfSumTol) {
    throw std::invalid_argument("Pmf: values sum to " + std::to_string(sum.value()) +
                                ", outside the accepted window around 1");
  }
  return from_weights(s);
}

Pmf Pmf::from_weights(const Seq& s) {
  const Eigen::ArrayXd& v = s.values();
  if ((v < 0.0).any()) throw std::invalid_argument("Pmf: negative entry");

  const auto [first, last] = positive_range(v);
  if (first < 0) throw std::invalid_argument("Pmf: all entries are zero");
  for (Eigen::Index j = first + 1; j < last; ++j) {
    if (v[j] == 0.0) {
      throw std::invalid_argument("Pmf: zero mass at interior index " +
                                  std::to_string(s.offset() + j));
    }
  }

  KahanSum sum;
  for (Eigen::Index j = 0; j < v.size(); ++j) sum.add(v[j]);
  Eigen::ArrayXd normalized = v / sum.value();
  Eigen::ArrayXd logs(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    logs[j] = normalized[j] > 0.0 ? std::log(normalized[j]) : -kInf;
  }
  return Pmf(Seq(s.offset(), std::move(normalized)), std::move(logs),
             s.offset() + static_cast<int>(first), s.offset() + static_cast<int>(last));
}

double Pmf::log_at(int n) const {
  if (n < support_lo_ || n > support_hi_) return -kInf;
  return logs_[n - seq_.offset()];
}

double Pmf::mean() const {
  KahanSum acc;
  for (int n = support_lo_; n <= support_hi_; ++n) acc.add(static_cast<double>(n) * at(n));
  return acc.value();
}

double Pmf::entropy() const {
  KahanSum acc;
  for (int n = support_lo_; n <= support_hi_; ++n) acc.add(-at(n) * log_at(n));
  return acc.value();
}

double mean(const Pmf& mu) { return mu.mean(); }
double entropy(const Pmf& mu) { return mu.entropy(); }

namespace {

// Builds the comparison sequence exp(log mu(n) - log base(n)) on [lo, hi],
// rescaled by its largest log so the entries stay in range. Zero-mass
// indices map to zero.
Seq ratio_sequence(const Pmf& mu, int lo, int hi, auto&& log_base) {
  Eigen::ArrayXd logs(hi - lo + 1);
  double top = -kInf;
  for (int n = lo; n <= hi; ++n) {
    const double ln = mu.log_at(n);
    logs[n - lo] = std::isinf(ln) ? -kInf : ln - log_base(n);
    top = std::max(top, logs[n - lo]);
  }
  Eigen::ArrayXd vals(logs.size());
  for (Eigen::Index j = 0; j < logs.size(); ++j) {
    vals[j] = std::isinf(logs[j]) ? 0.0 : std::exp(logs[j] - top);
  }
  return Seq(lo, std::move(vals));
}

}  // namespace

LogConcavityReport ulc_finite_report(const Pmf& mu, int n) {
  if (n < 0) throw std::invalid_argument("is_ulc_finite: n must be nonnegative");
  if (mu.support().lo < 0 || mu.support().hi > n) {
    throw std::invalid_argument("is_ulc_finite: support exceeds [0, n]");
  }
  return validate_log_concave(
      ratio_sequence(mu, 0, n, [n](int k) { return log_choose(n, k); }));
}

bool is_ulc_finite(const Pmf& mu, int n) { return ulc_finite_report(mu, n).is_log_concave; }

LogConcavityReport ulc_inf_report(const Pmf& mu) {
  if (mu.seq().lo() < 0) {
    throw std::invalid_argument("is_ulc_inf: carrier must be nonnegative");
  }
  const auto sup = mu.support();
  return validate_log_concave(
      ratio_sequence(mu, sup.lo, sup.hi, [](int k) { return -log_factorial(k); }));
}

bool is_ulc_inf(const Pmf& mu) { return ulc_inf_report(mu).is_log_concave; }

double poisson_pmf(double lambda, int at) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("poisson_pmf: lambda must be positive and finite");
  }
  if (at < 0) throw std::invalid_argument("poisson_pmf: index must be nonnegative");
  return std::exp(-lambda + at * std::log(lambda) - log_factorial(at));
}

double binomial_pmf(int n, double p, int at) {
  if (n < 0) throw std::invalid_argument("binomial_pmf: n must be nonnegative");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("binomial_pmf: p must be in (0,1)");
  if (at < 0 || at > n) throw std::invalid_argument("binomial_pmf: index outside [0, n]");
  return std::exp(log_choose(n, at) + at * std::log(p) + (n - at) * std::log1p(-p));
}

Pmf poisson_truncated(double lambda, int L) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_truncated: lambda must be positive");
  if (L < 0) throw std::invalid_argument("poisson_truncated: L must be nonnegative");
  Eigen::ArrayXd w(L + 1);
  for (int n = 0; n <= L; ++n) w[n] = poisson_pmf(lambda, n);
  return Pmf::from_weights(Seq(0, std::move(w)));
}

Pmf binomial(int n, double p) {
  Eigen::ArrayXd w(n + 1);
  for (int k = 0; k <= n; ++k) w[k] = binomial_pmf(n, p, k);
  return Pmf::from_weights(Seq(0, std::move(w)));
}

int poisson_truncation_point(double lambda, double tail_bound) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_truncation_point: lambda must be positive");
  if (!(tail_bound > 0.0)) throw std::invalid_argument("poisson_truncation_point: bound must be positive");
  // Walk far enough out that everything beyond `far` is negligible against
  // any sensible bound (the mass above far is < 2 pmf(far) once far > 2*lambda),
  // then trim the suffix backward while its accumulated mass stays under the
  // bound. Backward accumulation adds tiny terms before large ones.
  int far = static_cast<int>(std::ceil(2.0 * lambda)) + 8;
  while (poisson_pmf(lambda, far) > 1e-250) far += 32;
  double suffix = 0.0;
  int N = far;
  while (N > 0) {
    const double next = suffix + poisson_pmf(lambda, N);
    if (next >= tail_bound) break;
    suffix = next;
    --N;
  }
  return N;
}

Pmf convolve(const Pmf& a, const Pmf& b) {
  const Eigen::ArrayXd& va = a.seq().values();
  const Eigen::ArrayXd& vb = b.seq().values();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(va.size() + vb.size() - 1);
  for (Eigen::Index i = 0; i < va.size(); ++i) {
    if (va[i] == 0.0) continue;
    for (Eigen::Index j = 0; j < vb.size(); ++j) {
      out[i + j] += va[i] * vb[j];
    }
  }
  return Pmf::from_values(Seq(a.seq().offset() + b.seq().offset(), std::move(out)));
}

Pmf tilt(const Pmf& mu, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("tilt: theta must be positive and finite");
  }
  const double log_theta = std::log(theta);
  const auto sup = mu.support();
  // log mu(n) + n log theta, shifted by its maximum before exponentiating.
  double top = -kInf;
  Eigen::ArrayXd logs(mu.seq().size());
  for (Eigen::Index j = 0; j < mu.seq().size(); ++j) {
    const int n = mu.seq().offset() + static_cast<int>(j);
    if (n < sup.lo || n > sup.hi) {
      logs[j] = -kInf;
      continue;
    }
    logs[j] = mu.log_at(n) + n * log_theta;
    top = std::max(top, logs[j]);
  }
  Eigen::ArrayXd w(logs.size());
  for (Eigen::Index j = 0; j < logs.size(); ++j) {
    w[j] = std::isinf(logs[j]) ? 0.0 : std::exp(logs[j] - top);
  }
  return Pmf::from_weights(Seq(mu.seq().offset(), std::move(w)));
}

}  // namespace ulc
