// ulc - command line front end for the ultra-log-concave toolkit.
//
// Subcommands: validate, dof, family, extremal, verify, suite. Results go to
// stdout as JSON (default) or CSV (--emit csv); a short human summary goes to
// stderr. Exit codes: 0 success, 1 verification failure, 2 usage or input
// error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ulc/extremal.hpp"
#include "ulc/freedom.hpp"
#include "ulc/oracle.hpp"
#include "ulc/seqcore.hpp"
#include "ulc/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;

ulc::SeqFile load_seq_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ulc::seq_from_json(ulc::parse_json_text(buffer.str(), path));
}

void emit_json(const ulc::json& j) { std::cout << j.dump(2) << "\n"; }

void emit_csv_line(const std::string& header, const std::string& row) {
  std::cout << header << "\n" << row << "\n";
}

int run_validate(const std::string& input, const std::string& emit) {
  const ulc::SeqFile file = load_seq_file(input);
  const ulc::LogConcavityReport rep = ulc::validate_log_concave(file.seq);
  if (emit == "csv") {
    emit_csv_line("is_log_concave,worst_index,worst_margin",
                  std::string(rep.is_log_concave ? "true" : "false") + "," +
                      (rep.worst_index ? std::to_string(*rep.worst_index) : "") + "," +
                      ulc::format_double(rep.worst_margin));
  } else {
    emit_json(ulc::to_json(rep));
  }
  std::cerr << "validate: " << (rep.is_log_concave ? "log-concave" : "not log-concave")
            << "\n";
  return rep.is_log_concave ? kExitOk : kExitVerificationFailed;
}

int run_dof(const std::string& input, int samples, std::uint64_t seed, const std::string& emit) {
  const ulc::SeqFile file = load_seq_file(input);
  ulc::DofCertificate cert;
  try {
    cert = ulc::certify_dof(file.seq, samples, seed);
  } catch (const std::domain_error& e) {
    std::cerr << "dof: certification failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  if (emit == "csv") {
    emit_csv_line("basis_size,epsilon,trials,reflected",
                  std::to_string(cert.basis.size()) + "," + ulc::format_double(cert.epsilon) +
                      "," + std::to_string(cert.trials_checked) + "," +
                      (cert.reflected ? "true" : "false"));
  } else {
    emit_json(ulc::to_json(cert));
  }
  std::cerr << "dof: basis size " << cert.basis.size() << ", epsilon " << cert.epsilon << "\n";
  return kExitOk;
}

int run_family(int k, int l, double x, int grid, const std::string& emit) {
  const ulc::FamilyProfile prof = ulc::family_profile(k, l, x);
  const double y0 = ulc::find_psi_zero(k, l);  // degenerate (0,0) throws -> exit 2
  const ulc::HVerifyReport hrep = ulc::verify_h_nonneg(k, l, grid);

  // claim1 >= -1e-12 * (f f' + x f'^2), tested in the scaled series so the
  // comparison stays representable at extreme (k, l, x).
  const ulc::TruncExpSeries ev = ulc::eval_family_series(k, l, x);
  const double claim1_scaled = x * (ev.s0 * ev.s2 - ev.s1 * ev.s1) + ev.s0 * ev.s1;
  const bool claim1_ok = claim1_scaled >= -1e-12 * (ev.s0 * ev.s1 + x * ev.s1 * ev.s1);
  const bool ok = claim1_ok && hrep.passed;

  if (emit == "csv") {
    emit_csv_line(
        "k,l,x,f,f_prime,f_double_prime,mean,h,h_prime,psi,claim1,y0,h_at_y0,passed",
        std::to_string(k) + "," + std::to_string(l) + "," + ulc::format_double(x) + "," +
            ulc::format_double(prof.f) + "," + ulc::format_double(prof.f_prime) + "," +
            ulc::format_double(prof.f_double_prime) + "," + ulc::format_double(prof.mean) +
            "," + ulc::format_double(prof.h) + "," + ulc::format_double(prof.h_prime) + "," +
            ulc::format_double(prof.psi) + "," + ulc::format_double(prof.claim1) + "," +
            ulc::format_double(y0) + "," + ulc::format_double(hrep.h_at_y0) + "," +
            (ok ? "true" : "false"));
  } else {
    ulc::json out{{"k", k}, {"l", l}, {"x", x}};
    out["profile"] = ulc::to_json(prof);
    out["y0"] = y0;
    out["h_at_y0"] = hrep.h_at_y0;
    out["h_verify"] = ulc::to_json(hrep);
    out["claim1_nonnegative"] = claim1_ok;
    out["passed"] = ok;
    emit_json(out);
  }
  std::cerr << "family (" << k << ", " << l << ", " << x << "): mean " << prof.mean
            << ", y0 " << y0 << ", h(y0) " << hrep.h_at_y0
            << (ok ? "" : "  [verification FAILED]") << "\n";
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_extremal(int n0, int L, const std::string& emit) {
  const ulc::ExtremalResult res = ulc::minimize_prob_at_mean(n0, L);
  if (emit == "csv") {
    emit_csv_line(ulc::csv_header(res), ulc::csv_row(res));
  } else {
    emit_json(ulc::to_json(res));
  }
  std::cerr << "extremal: min mu(" << n0 << ") = " << res.min_prob << " at (k, l, x) = ("
            << res.best_k << ", " << res.best_l << ", " << res.best_x << "), Poisson value "
            << res.poisson_prob << "\n";
  const bool ok = res.min_prob >= res.poisson_prob - 1e-9;
  if (!ok) std::cerr << "extremal: Poisson lower bound violated\n";
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_verify(int n0, int L, int trials, std::uint64_t seed, const std::string& emit) {
  const ulc::TrialConfig cfg{n0, L, trials, seed};
  const ulc::TrialReport rep = ulc::run_theorem_trials(cfg);
  if (emit == "csv") {
    emit_csv_line("n0,L,trials,seed,evaluated,skipped,violations,min_observed_prob,min_gap",
                  std::to_string(cfg.n0) + "," + std::to_string(cfg.L) + "," +
                      std::to_string(cfg.trials) + "," + std::to_string(cfg.seed) + "," +
                      std::to_string(rep.evaluated) + "," + std::to_string(rep.skipped) + "," +
                      std::to_string(rep.violations) + "," +
                      ulc::format_double(rep.min_observed_prob) + "," +
                      ulc::format_double(rep.min_gap));
  } else {
    emit_json(ulc::to_json(cfg, rep));
  }
  std::cerr << "verify: " << rep.evaluated << " evaluated, " << rep.skipped << " skipped, "
            << rep.violations << " violations\n";
  return rep.violations == 0 ? kExitOk : kExitVerificationFailed;
}

int run_suite(int L, int cases, std::uint64_t seed, const std::string& emit) {
  const ulc::PropertySuiteReport rep = ulc::property_suite(L, cases, seed);
  if (emit == "csv") {
    emit_csv_line("L,cases,seed,closure_failures,domination_failures,entropy_failures,passed",
                  std::to_string(L) + "," + std::to_string(cases) + "," + std::to_string(seed) +
                      "," + std::to_string(rep.closure.failures) + "," +
                      std::to_string(rep.domination.failures) + "," +
                      std::to_string(rep.entropy.failures) + "," +
                      (rep.all_passed() ? "true" : "false"));
  } else {
    emit_json(ulc::to_json(rep));
  }
  std::cerr << "suite: closure " << rep.closure.failures << " failures, domination "
            << rep.domination.failures << " failures, entropy " << rep.entropy.failures
            << " failures\n";
  return rep.all_passed() ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{"Extremal toolkit for ultra-log-concave distributions"};
  app.require_subcommand(1);

  std::string input;
  std::string emit = "json";
  int mean_target = 1;
  int support = 10;
  int trials = 1000;
  int samples = 100;
  int grid = 100;
  int fam_k = 0, fam_l = 1;
  double fam_x = 1.0;
  std::uint64_t seed = 0;

  auto add_emit = [&](CLI::App* cmd) {
    cmd->add_option("--emit", emit, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a sequence for log-concavity");
  validate->add_option("--input", input, "Sequence JSON file")->required();
  add_emit(validate);

  CLI::App* dof = app.add_subcommand(
      "dof", "Certify degrees of freedom of a positive log-concave sequence");
  dof->add_option("--input", input, "Sequence JSON file")->required();
  dof->add_option("--samples", samples, "Perturbation draws per epsilon")
      ->capture_default_str();
  dof->add_option("--seed", seed, "Certification seed")->capture_default_str();
  add_emit(dof);

  CLI::App* family = app.add_subcommand(
      "family", "Profile a truncated-exponential family member (k, l, x)");
  family->add_option("--k", fam_k, "Lower support end")->required();
  family->add_option("--l", fam_l, "Upper support end")->required();
  family->add_option("--x", fam_x, "Family parameter x > 0")->required();
  family->add_option("--grid", grid, "Points for the h profile check")->capture_default_str();
  add_emit(family);

  CLI::App* extremal = app.add_subcommand(
      "extremal", "Minimize mu(n0) over mean-n0 families supported in [0, L]");
  extremal->add_option("--mean", mean_target, "Integral mean n0")->required();
  extremal->add_option("--support", support, "Support bound L")->required();
  add_emit(extremal);

  CLI::App* verify = app.add_subcommand(
      "verify", "Monte-Carlo check of the Poisson lower bound on random ULC pmfs");
  verify->add_option("--mean", mean_target, "Integral mean n0")->required();
  verify->add_option("--support", support, "Support bound L")->required();
  verify->add_option("--trials", trials, "Number of trials")->capture_default_str();
  verify->add_option("--seed", seed, "Master seed")->capture_default_str();
  add_emit(verify);

  CLI::App* suite = app.add_subcommand(
      "suite", "Property suites: convolution closure, convex domination, entropy");
  suite->add_option("--support", support, "Support bound L")->required();
  suite->add_option("--trials", trials, "Sampled cases per sub-suite")->capture_default_str();
  suite->add_option("--seed", seed, "Master seed")->capture_default_str();
  add_emit(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(input, emit);
    if (app.got_subcommand(dof)) return run_dof(input, samples, seed, emit);
    if (app.got_subcommand(family)) return run_family(fam_k, fam_l, fam_x, grid, emit);
    if (app.got_subcommand(extremal)) return run_extremal(mean_target, support, emit);
    if (app.got_subcommand(verify)) return run_verify(mean_target, support, trials, seed, emit);
    if (app.got_subcommand(suite)) return run_suite(support, trials, seed, emit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (...) {
    std::cerr << "error: unexpected failure\n";
    return kExitUsage;
  }
}
