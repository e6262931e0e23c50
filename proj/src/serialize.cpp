#include "ulc/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ulc {

namespace {

// nlohmann emits NaN/inf as `null`; make that explicit for report fields that
// are legitimately infinite (empty minima).
json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

int line_of_byte_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json seq_to_json(const Seq& s, const std::string& kind) {
  json values = json::array();
  for (Eigen::Index j = 0; j < s.size(); ++j) values.push_back(s[j]);
  return json{{"offset", s.offset()}, {"values", std::move(values)}, {"kind", kind}};
}

SeqFile seq_from_json(const json& j) {
  if (!j.is_object() || !j.contains("offset") || !j.contains("values") || !j.contains("kind")) {
    throw std::invalid_argument(
        "sequence JSON must be an object with \"offset\", \"values\" and \"kind\"");
  }
  if (!j["offset"].is_number_integer()) {
    throw std::invalid_argument("sequence JSON: \"offset\" must be an integer");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind != "pmf" && kind != "weights") {
    throw std::invalid_argument("sequence JSON: \"kind\" must be \"pmf\" or \"weights\"");
  }
  const json& vals = j["values"];
  if (!vals.is_array() || vals.empty()) {
    throw std::invalid_argument("sequence JSON: \"values\" must be a nonempty array");
  }
  Eigen::ArrayXd v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!vals[i].is_number()) {
      throw std::invalid_argument("sequence JSON: values[" + std::to_string(i) +
                                  "] is not a number");
    }
    v[static_cast<Eigen::Index>(i)] = vals[i].get<double>();
  }
  return SeqFile{Seq(j["offset"].get<int>(), std::move(v)), kind};
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(source + ":" + std::to_string(line_of_byte_offset(text, e.byte)) +
                                ": " + e.what());
  }
}

json to_json(const LogConcavityReport& r) {
  return json{{"is_log_concave", r.is_log_concave},
              {"worst_index", r.worst_index ? json(*r.worst_index) : json(nullptr)},
              {"worst_margin", finite_or_null(r.worst_margin)}};
}

json to_json(const DofCertificate& c) {
  json basis = json::array();
  for (const Seq& d : c.basis) basis.push_back(seq_to_json(d, "weights"));
  return json{{"basis", std::move(basis)},
              {"epsilon", c.epsilon},
              {"trials", c.trials_checked},
              {"reflected", c.reflected}};
}

json to_json(const FamilyProfile& p) {
  return json{{"f", p.f},
              {"f_prime", p.f_prime},
              {"f_double_prime", p.f_double_prime},
              {"mean", p.mean},
              {"h", p.h},
              {"h_prime", p.h_prime},
              {"psi", finite_or_null(p.psi)},
              {"claim1", p.claim1}};
}

json to_json(const ExtremalResult& r) {
  return json{{"n0", r.n0},
              {"L", r.L},
              {"k", r.best_k},
              {"l", r.best_l},
              {"x0", r.best_x},
              {"min_prob", r.min_prob},
              {"poisson_prob", r.poisson_prob},
              {"gap", r.gap}};
}

json to_json(const HVerifyReport& r) {
  return json{{"k", r.k},
              {"l", r.l},
              {"y0", r.y0},
              {"h_at_y0", r.h_at_y0},
              {"grid_min_h", r.grid_min_h},
              {"grid_argmin_x", r.grid_argmin_x},
              {"grid_margin", r.grid_margin},
              {"passed", r.passed}};
}

json to_json(const TrialConfig& cfg, const TrialReport& r) {
  json out{{"n0", cfg.n0},
           {"L", cfg.L},
           {"trials", cfg.trials},
           {"seed", cfg.seed},
           {"evaluated", r.evaluated},
           {"skipped", r.skipped},
           {"violations", r.violations},
           {"min_observed_prob", finite_or_null(r.min_observed_prob)},
           {"min_gap", finite_or_null(r.min_gap)},
           {"worst_seed", r.worst_seed ? json(*r.worst_seed) : json(nullptr)}};
  out["worst_pmf"] = r.worst_pmf ? seq_to_json(r.worst_pmf->seq(), "pmf") : json(nullptr);
  return out;
}

namespace {

json to_json(const SubSuiteReport& r) {
  return json{{"cases", r.cases},
              {"failures", r.failures},
              {"worst_margin", finite_or_null(r.worst_margin)}};
}

}  // namespace

json to_json(const PropertySuiteReport& r) {
  return json{{"closure", to_json(r.closure)},
              {"domination", to_json(r.domination)},
              {"entropy", to_json(r.entropy)},
              {"passed", r.all_passed()}};
}

std::string csv_header(const ExtremalResult&) {
  return "n0,L,k,l,x0,min_prob,poisson_prob,gap";
}

std::string csv_row(const ExtremalResult& r) {
  return std::to_string(r.n0) + "," + std::to_string(r.L) + "," + std::to_string(r.best_k) +
         "," + std::to_string(r.best_l) + "," + format_double(r.best_x) + "," +
         format_double(r.min_prob) + "," + format_double(r.poisson_prob) + "," +
         format_double(r.gap);
}

}  // namespace ulc
