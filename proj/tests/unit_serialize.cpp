#include <doctest.h>

#include <stdexcept>
#include <string>

#include "ulc/freedom.hpp"
#include "ulc/serialize.hpp"

using namespace ulc;

TEST_SUITE("serialize") {

TEST_CASE("sequence JSON round trip") {
  Eigen::ArrayXd v(3);
  v << 0.25, 0.5, 0.25;
  const Seq s(2, v);
  const json j = seq_to_json(s, "pmf");
  const SeqFile back = seq_from_json(j);
  CHECK(back.kind == "pmf");
  CHECK(back.seq.offset() == 2);
  REQUIRE(back.seq.size() == 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(back.seq[i] == s[i]);
}

TEST_CASE("sequence JSON rejects malformed inputs") {
  CHECK_THROWS_AS(seq_from_json(json{{"offset", 0}, {"values", json::array()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      seq_from_json(json{{"offset", 0}, {"values", {1.0}}, {"kind", "other"}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      seq_from_json(json{{"offset", 0.5}, {"values", {1.0}}, {"kind", "pmf"}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      seq_from_json(json{{"offset", 0}, {"values", {1.0, "x"}}, {"kind", "pmf"}}),
      std::invalid_argument);
}

TEST_CASE("parse errors carry the source name and line") {
  const std::string text = "{\n  \"offset\": 0,\n  THIS IS NOT JSON\n}";
  try {
    parse_json_text(text, "input.json");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("input.json:3:") != std::string::npos);
  }
}

TEST_CASE("certificate JSON uses the documented keys") {
  Eigen::ArrayXd v(4);
  v << 1.0, 0.5, 0.25, 0.125;
  const DofCertificate cert = certify_dof(Seq(0, v), 20, 5);
  const json j = to_json(cert);
  REQUIRE(j.contains("basis"));
  REQUIRE(j.contains("epsilon"));
  REQUIRE(j.contains("trials"));
  REQUIRE(j.contains("reflected"));
  CHECK(j["basis"].size() == cert.basis.size());
  CHECK(j["trials"] == 20);
  CHECK(j["basis"][0]["kind"] == "weights");
}

TEST_CASE("extremal result CSV") {
  ExtremalResult r;
  r.n0 = 1;
  r.L = 2;
  r.best_k = 0;
  r.best_l = 2;
  r.best_x = 1.5;
  r.min_prob = 0.5;
  r.poisson_prob = 0.25;
  r.gap = 0.25;
  CHECK(csv_header(r) == "n0,L,k,l,x0,min_prob,poisson_prob,gap");
  CHECK(csv_row(r) == "1,2,0,2,1.5,0.5,0.25,0.25");
}

}  // TEST_SUITE
