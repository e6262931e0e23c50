// Acceptance suite: runs every criterion end to end and prints one PASS/FAIL
// line each. Usage: ulc_acceptance <path-to-ulc-cli> <fixtures-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "ulc/extremal.hpp"
#include "ulc/freedom.hpp"
#include "ulc/numeric.hpp"
#include "ulc/oracle.hpp"
#include "ulc/rng.hpp"
#include "ulc/serialize.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << what << "\n";
  if (!ok) ++g_failures;
}

// ---- 1. Poisson bound reproduced by the reduction ------------------------

void criterion_reduction() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_low = 1.0, worst_high = 0.0;
  for (int n0 = 1; n0 <= 8; ++n0) {
    const ulc::ExtremalResult res = ulc::minimize_prob_at_mean(n0, n0 + 40);
    worst_low = std::min(worst_low, res.gap);
    worst_high = std::max(worst_high, res.gap);
    ok = ok && res.gap >= -1e-9 && res.gap <= 1e-6;
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 5.0;
  std::ostringstream msg;
  msg << "reduction reproduces the Poisson bound for n0 = 1..8, L = n0+40 "
      << "(gap in [" << worst_low << ", " << worst_high << "], " << elapsed << " s)";
  report(1, ok, msg.str());
}

// ---- 2. Closed-form minimizer at (n0, L) = (1, 2) -------------------------

void criterion_closed_form() {
  const ulc::ExtremalResult res = ulc::minimize_prob_at_mean(1, 2);
  const double expected = std::sqrt(2.0) - 1.0;
  const bool ok = res.best_k == 0 && res.best_l == 2 &&
                  std::abs(res.best_x - std::sqrt(2.0)) <= 1e-9 &&
                  std::abs(res.min_prob - expected) <= 1e-12;
  std::ostringstream msg;
  msg << "closed-form spot check (1, 2): min_prob = " << res.min_prob << " vs sqrt(2)-1, |diff| = "
      << std::abs(res.min_prob - expected);
  report(2, ok, msg.str());
}

// ---- 3. Monte-Carlo oracle -------------------------------------------------

void criterion_monte_carlo() {
  const auto t0 = Clock::now();
  bool ok = true;
  int total_violations = 0;
  int total_evaluated = 0;
  for (int n0 = 1; n0 <= 5; ++n0) {
    const ulc::TrialConfig cfg{n0, 25, 10000, static_cast<std::uint64_t>(1000 + n0)};
    const ulc::TrialReport serial = ulc::run_theorem_trials(cfg, 1);
    const ulc::TrialReport parallel = ulc::run_theorem_trials(cfg, 4);
    total_violations += serial.violations;
    total_evaluated += serial.evaluated;
    const bool same = serial.violations == parallel.violations &&
                      serial.evaluated == parallel.evaluated &&
                      serial.skipped == parallel.skipped &&
                      serial.min_observed_prob == parallel.min_observed_prob &&
                      serial.min_gap == parallel.min_gap &&
                      serial.worst_seed == parallel.worst_seed;
    ok = ok && same && serial.violations == 0;
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 60.0;
  std::ostringstream msg;
  msg << "Monte-Carlo oracle: 10^4 ULC pmfs on [0,25] tilted to n0 = 1..5, "
      << total_violations << " violations over " << total_evaluated
      << " evaluated trials, serial == parallel, " << elapsed << " s";
  report(3, ok, msg.str());
}

// ---- 4 and 5. Series-inequality sweep and the psi / h profile ---------------

std::vector<std::pair<int, int>> sample_kl_pairs(int count, std::uint64_t seed) {
  ulc::RandomStream rng(seed);
  std::vector<std::pair<int, int>> pairs;
  while (static_cast<int>(pairs.size()) < count) {
    const int k = rng.uniform_int(0, 30);
    const int l = rng.uniform_int(k, 30);
    if (k == 0 && l == 0) continue;  // degenerate constant family
    pairs.emplace_back(k, l);
  }
  return pairs;
}

void criteria_analytic_profile(const std::vector<std::pair<int, int>>& pairs) {
  // claim1 = -x f'^2 + x f f'' + f f' >= -1e-12 * (f f' + x f'^2), evaluated
  // in the scaled series to keep the extremes of the sweep representable.
  bool claim1_ok = true;
  double claim1_worst = 0.0;  // most negative value / scale seen
  const double xlo = std::log(1e-6), xhi = std::log(1e6);
  for (const auto& [k, l] : pairs) {
    for (int j = 0; j < 100; ++j) {
      const double x = std::exp(xlo + j * (xhi - xlo) / 99.0);
      const ulc::TruncExpSeries ev = ulc::eval_family_series(k, l, x);
      const double value = x * (ev.s0 * ev.s2 - ev.s1 * ev.s1) + ev.s0 * ev.s1;
      const double scale = ev.s0 * ev.s1 + x * ev.s1 * ev.s1;
      if (scale > 0.0) claim1_worst = std::min(claim1_worst, value / scale);
      claim1_ok = claim1_ok && value >= -1e-12 * scale;
    }
  }
  std::ostringstream msg4;
  msg4 << "series inequality sweep: " << pairs.size() << " (k,l) pairs x 100 log-spaced x, "
       << "worst relative value " << claim1_worst;
  report(4, claim1_ok, msg4.str());

  // Unique zero of psi and the h profile.
  bool ok = true;
  double worst_psi_step = 1.0, worst_residual = 0.0, worst_h_margin = 1.0, worst_h0 = 1.0;
  for (const auto& [k, l] : pairs) {
    const double y0 = ulc::find_psi_zero(k, l);
    if (y0 > 0.0) {
      const ulc::TruncExpSeries ev = ulc::eval_family_series(k, l, y0);
      const double residual = std::abs(ev.s0 - ev.s1) / ev.s0;
      worst_residual = std::max(worst_residual, residual);
      ok = ok && residual <= 1e-10;
    }
    const ulc::HVerifyReport rep = ulc::verify_h_nonneg(k, l, 100);
    ok = ok && rep.passed;
    worst_h_margin = std::min(worst_h_margin, rep.grid_margin);
    worst_h0 = std::min(worst_h0, rep.h_at_y0);

    // psi strictly increasing (within 1e-12) along the same grid.
    const double lo = std::max(1e-6, y0 / 1e3), hi = y0 * 1e3 + 1.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < 100; ++j) {
      const double x = std::exp(std::log(lo) + j * (std::log(hi) - std::log(lo)) / 99.0);
      const double psi = ulc::family_profile(k, l, x).psi;
      worst_psi_step = std::min(worst_psi_step, psi - prev);
      ok = ok && psi > prev - 1e-12;
      prev = psi;
    }
  }
  std::ostringstream msg5;
  msg5 << "psi / h profile: worst psi step " << worst_psi_step << ", worst y0 residual "
       << worst_residual << ", worst h margin " << worst_h_margin << ", min h(y0) " << worst_h0;
  report(5, ok, msg5.str());
}

// ---- 6. Degrees-of-freedom certificates ------------------------------------

void criterion_dof() {
  bool ok = true;
  double min_eps = 1.0;
  const double eps_floor = std::ldexp(1.0, -60);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const int pieces = 1 + static_cast<int>(i % 4);
    const ulc::Seq p = testsupport::random_piecewise_geometric(pieces, ulc::derive_seed(62, i));
    try {
      const ulc::DofCertificate cert = ulc::certify_dof(p, 100, ulc::derive_seed(63, i));
      const int rank = ulc::numerical_rank(cert.basis);
      ok = ok && static_cast<int>(cert.basis.size()) == pieces + 1 && rank == pieces + 1 &&
           cert.epsilon >= eps_floor && cert.trials_checked == 100;
      min_eps = std::min(min_eps, cert.epsilon);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  std::ostringstream msg;
  msg << "DOF certificates on 100 random piecewise-geometric sequences (1-4 slopes): "
      << "rank = slopes+1, min epsilon " << min_eps;
  report(6, ok, msg.str());
}

// ---- 7 and 8. Closure, domination, entropy ---------------------------------

void criteria_property_suites() {
  const ulc::PropertySuiteReport rep = ulc::property_suite(10, 500, 8080);

  std::ostringstream msg7;
  msg7 << "convolution closure: " << rep.closure.cases << " ULC(n) x ULC(m) pairs, "
       << rep.closure.failures << " failures, worst margin " << rep.closure.worst_margin;
  report(7, rep.closure.failures == 0 && rep.closure.worst_margin >= -1e-10, msg7.str());

  std::ostringstream msg8;
  msg8 << "domination and entropy vs mean-matched Poisson: " << rep.domination.cases
       << " pmfs, domination worst slack " << rep.domination.worst_margin
       << ", entropy worst slack " << rep.entropy.worst_margin;
  report(8, rep.domination.failures == 0 && rep.entropy.failures == 0, msg8.str());
}

// ---- 9. CLI golden runs -----------------------------------------------------

struct RunResult {
  std::string output;
  int exit_code = -1;
};

RunResult run_command(const std::string& command) {
  RunResult res;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_cli_golden(const std::string& cli, const std::string& fixtures) {
  const std::string manifest_text = read_file(fixtures + "/manifest.json");
  bool ok = !manifest_text.empty();
  std::string detail;
  if (ok) {
    const ulc::json manifest = ulc::parse_json_text(manifest_text, "manifest.json");
    for (const auto& entry : manifest) {
      std::string command = cli;
      for (const auto& arg : entry["args"]) {
        std::string a = arg.get<std::string>();
        const std::string placeholder = "<FIXTURES>";
        if (auto pos = a.find(placeholder); pos != std::string::npos) {
          a.replace(pos, placeholder.size(), fixtures);
        }
        command += " " + a;
      }
      const RunResult run = run_command(command);
      const std::string expected = read_file(fixtures + "/" + entry["stdout"].get<std::string>());
      const int expected_code = entry["exit"].get<int>();
      const bool match = run.output == expected && run.exit_code == expected_code;
      if (!match) {
        detail += " [" + entry["name"].get<std::string>() + ": exit " +
                  std::to_string(run.exit_code) + " vs " + std::to_string(expected_code) +
                  (run.output == expected ? "" : ", output differs") + "]";
      }
      ok = ok && match;
    }
  } else {
    detail = " [manifest.json missing]";
  }
  report(9, ok, "CLI golden runs reproduce byte-identical outputs and exit codes" + detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: ulc_acceptance <ulc-cli-path> <fixtures-dir>\n";
    return 2;
  }

  criterion_reduction();
  criterion_closed_form();
  criterion_monte_carlo();
  const auto pairs = sample_kl_pairs(200, 4040);
  criteria_analytic_profile(pairs);
  criterion_dof();
  criteria_property_suites();
  criterion_cli_golden(argv[1], argv[2]);

  if (g_failures == 0) {
    std::cout << "all acceptance criteria passed\n";
    return 0;
  }
  std::cout << g_failures << " acceptance criteria FAILED\n";
  return 1;
}
