#include "ulc/freedom.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

#include "ulc/numeric.hpp"
#include "ulc/rng.hpp"

namespace ulc {

namespace {

void require_strictly_positive(const Seq& p, const char* who) {
  if (!(p.values() > 0.0).all()) {
    throw std::invalid_argument(std::string(who) + ": sequence must be strictly positive");
  }
}

// Positional breakpoint indices into the slope array.
std::vector<Eigen::Index> breakpoint_positions(const Eigen::ArrayXd& slopes, double tol) {
  std::vector<Eigen::Index> pos{0};
  double level = slopes[0];
  for (Eigen::Index j = 1; j < slopes.size(); ++j) {
    if (slopes[j] > level + tol) {
      pos.push_back(j);
      level = slopes[j];
    }
  }
  return pos;
}

}  // namespace

Potential potential_of(const Seq& p) {
  require_strictly_positive(p, "potential_of");
  Eigen::ArrayXd v = -p.values().log();
  for (Eigen::Index j = 1; j + 1 < v.size(); ++j) {
    if (v[j + 1] + v[j - 1] - 2.0 * v[j] < -kPotentialConvexityTol) {
      throw std::invalid_argument("potential_of: potential is not convex at index " +
                                  std::to_string(p.offset() + j));
    }
  }
  return Potential{Seq(p.offset(), std::move(v))};
}

SlopeSeq slope_sequence(const Potential& V) {
  const Eigen::ArrayXd& v = V.seq.values();
  if (v.size() < 2) {
    throw std::domain_error("slope_sequence: potential has a single point");
  }
  Eigen::ArrayXd s = v.tail(v.size() - 1) - v.head(v.size() - 1);
  return SlopeSeq{Seq(V.seq.offset(), std::move(s))};
}

std::vector<int> breakpoints(const Potential& V, double tol) {
  if (V.seq.size() == 1) return {V.seq.lo()};  // no slopes to jump
  const SlopeSeq s = slope_sequence(V);
  std::vector<int> out;
  for (Eigen::Index j : breakpoint_positions(s.seq.values(), tol)) {
    out.push_back(s.seq.offset() + static_cast<int>(j));
  }
  return out;
}

PerturbationBasis perturbation_basis(const Seq& p) {
  require_strictly_positive(p, "perturbation_basis");
  const Eigen::Index m = p.size();
  if (m == 1) {
    return PerturbationBasis{{p}, false};
  }

  const Potential V = potential_of(p);  // also validates log-concavity
  const SlopeSeq s = slope_sequence(V);
  const Eigen::ArrayXd& slopes = s.seq.values();

  bool reflected = false;
  if (std::abs(slopes[0]) <= kSlopeTol) {
    if (std::abs(slopes[m - 2]) <= kSlopeTol) {
      // Constant potential: the piecewise-linear construction degenerates, but the
      // affine direction p * n keeps 1 + delta*n positive and log-concave
      // for small delta.
      Eigen::ArrayXd idx(m);
      for (Eigen::Index j = 0; j < m; ++j) idx[j] = static_cast<double>(p.offset() + j);
      return PerturbationBasis{{p, Seq(p.offset(), p.values() * idx)}, false};
    }
    reflected = true;
  }

  const Seq work = reflected ? p.reversed() : p;
  const Eigen::ArrayXd& w = work.values();
  const Eigen::ArrayXd Vw = -w.log();
  const Eigen::ArrayXd sw = Vw.tail(m - 1) - Vw.head(m - 1);
  const std::vector<Eigen::Index> bps = breakpoint_positions(sw, kSlopeTol);

  std::vector<Seq> directions;
  directions.reserve(bps.size() + 1);
  auto emit = [&](Eigen::ArrayXd vals) {
    directions.emplace_back(p.offset(), reflected ? Eigen::ArrayXd(vals.reverse()) : vals);
  };

  emit(w);  // e^{-V} * 1
  for (const Eigen::Index bp : bps) {
    // V_i follows V on [0, n_i] and continues with slope V'(n_i) after.
    Eigen::ArrayXd Vi(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Vi[j] = j <= bp ? Vw[j] : Vw[bp] + sw[bp] * static_cast<double>(j - bp);
    }
    emit(w * Vi);
  }
  return PerturbationBasis{std::move(directions), reflected};
}

int numerical_rank(const std::vector<Seq>& directions, double threshold) {
  if (directions.empty()) return 0;
  const Eigen::Index rows = directions.front().size();
  Eigen::MatrixXd M(rows, static_cast<Eigen::Index>(directions.size()));
  for (std::size_t c = 0; c < directions.size(); ++c) {
    if (directions[c].size() != rows) {
      throw std::invalid_argument("numerical_rank: directions on different carriers");
    }
    const Eigen::ArrayXd& v = directions[c].values();
    const double top = v.abs().maxCoeff();
    M.col(static_cast<Eigen::Index>(c)) = (top > 0.0 ? Eigen::ArrayXd(v / top) : v).matrix();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > threshold * sv[0]) ++rank;
  }
  return rank;
}

DofCertificate certify_dof(const Seq& p, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("certify_dof: samples must be >= 1");
  PerturbationBasis basis = perturbation_basis(p);
  const int b = static_cast<int>(basis.directions.size());
  if (numerical_rank(basis.directions) != b) {
    throw std::runtime_error("certify_dof: perturbation directions are numerically dependent");
  }

  double eps = 1.0;
  for (int attempt = 0; attempt <= kMaxEpsilonHalvings; ++attempt, eps *= 0.5) {
    const std::uint64_t attempt_seed = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    bool all_ok = true;
    for (int t = 0; t < samples && all_ok; ++t) {
      RandomStream rng(derive_seed(attempt_seed, static_cast<std::uint64_t>(t)));
      Eigen::ArrayXd q = p.values();
      for (int j = 0; j < b; ++j) {
        q += rng.symmetric(eps) * basis.directions[j].values();
      }
      if ((q < 0.0).any()) {
        all_ok = false;
      } else {
        all_ok = validate_log_concave(Seq(p.offset(), std::move(q))).is_log_concave;
      }
    }
    if (all_ok) {
      return DofCertificate{std::move(basis.directions), eps, samples, basis.reflected};
    }
  }
  throw std::domain_error(
      "certify_dof: no epsilon >= 2^-60 certifies; the sequence sits on the "
      "log-concavity boundary at this tolerance");
}

bool is_extreme_candidate(const Seq& p, const ConstraintSet& c) {
  if (c.vectors.empty() || c.vectors.size() != c.targets.size()) {
    throw std::invalid_argument("is_extreme_candidate: malformed constraint set");
  }
  for (std::size_t i = 0; i < c.vectors.size(); ++i) {
    if (!(c.vectors[i].carrier() == p.carrier())) {
      throw std::invalid_argument("is_extreme_candidate: constraint carrier mismatch");
    }
    KahanSum dot;
    for (Eigen::Index j = 0; j < p.size(); ++j) dot.add(p[j] * c.vectors[i][j]);
    const double target = c.targets[i];
    if (std::abs(dot.value() - target) > kFeasibilityRelTol * std::max(1.0, std::abs(target))) {
      throw std::invalid_argument("is_extreme_candidate: p violates constraint " +
                                  std::to_string(i));
    }
  }

  // Degrees of freedom are certified on the positive support only.
  Eigen::Index first = -1, last = -1;
  const Eigen::ArrayXd& v = p.values();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v[j] > 0.0) {
      if (first < 0) first = j;
      last = j;
    }
  }
  if (first < 0) throw std::invalid_argument("is_extreme_candidate: p is identically zero");
  const Seq core(p.offset() + static_cast<int>(first),
                 v.segment(first, last - first + 1));

  PerturbationBasis basis = perturbation_basis(core);
  if (numerical_rank(basis.directions) != static_cast<int>(basis.directions.size())) {
    throw std::runtime_error("is_extreme_candidate: dependent perturbation directions");
  }
  return basis.directions.size() <= c.vectors.size();
}

}  // namespace ulc
