#pragma once

#include <json.hpp>

#include <string>

#include "ulc/extremal.hpp"
#include "ulc/freedom.hpp"
#include "ulc/oracle.hpp"
#include "ulc/seqcore.hpp"

namespace ulc {

using json = nlohmann::json;

// The shared sequence interchange format:
//   {"offset": <int>, "values": [<float>...], "kind": "pmf" | "weights"}
struct SeqFile {
  Seq seq;
  std::string kind;  // "pmf" or "weights"
};

json seq_to_json(const Seq& s, const std::string& kind);
SeqFile seq_from_json(const json& j);

// Parses JSON text, rewriting parse errors as std::invalid_argument with a
// "<source>:<line>: ..." prefix.
json parse_json_text(const std::string& text, const std::string& source);

json to_json(const LogConcavityReport& r);
json to_json(const DofCertificate& c);
json to_json(const FamilyProfile& p);
json to_json(const ExtremalResult& r);
json to_json(const HVerifyReport& r);
json to_json(const TrialConfig& cfg, const TrialReport& r);
json to_json(const PropertySuiteReport& r);

// CSV rows under fixed documented headers; floats print with 17 significant
// digits so rows round-trip.
std::string csv_header(const ExtremalResult&);
std::string csv_row(const ExtremalResult& r);

std::string format_double(double v);

}  // namespace ulc
