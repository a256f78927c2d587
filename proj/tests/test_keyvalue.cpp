#include "doctest.h"

#include "bsl/keyvalue.hpp"

using namespace bsl;

TEST_CASE("sections, comments and typed values") {
  const auto doc = kv::Document::parse(
      "# header comment\n"
      "top = 1\n"
      "[solver]\n"
      "  tol = 1e-8   # trailing comment\n"
      "  n = 24\n"
      "  alpha = 0, 0, 1\n"
      "  ks = 0.5 1 2\n"
      "  method = krylov\n"
      "[piece]\n"
      "c = 1\n"
      "[piece]\n"
      "c = 2\n");
  REQUIRE(doc.first("") != nullptr);
  CHECK(doc.first("")->get_int("top") == 1);
  const auto& s = doc.require("solver");
  CHECK(s.get_double("tol") == 1e-8);
  CHECK(s.get_int("n") == 24);
  CHECK(s.get_vec3("alpha") == Vec3(0, 0, 1));
  CHECK(s.get_list("ks") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(s.get_string("method") == "krylov");
  CHECK(s.get_double("missing", 3.5) == 3.5);
  CHECK(doc.all("piece").size() == 2);
  CHECK(doc.all("piece")[1]->get_double("c") == 2.0);
  CHECK(doc.first("nope") == nullptr);
}

TEST_CASE("malformed input reports line and column") {
  try {
    kv::Document::parse("[a]\nx = 1\ny 2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
  }
  try {
    const auto doc = kv::Document::parse("[a]\nx = 1, oops\n");
    doc.require("a").get_list("x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 8);
  }
  CHECK_THROWS_AS(kv::Document::parse("[unterminated\n"), ParseError);
  CHECK_THROWS_AS(kv::Document::parse("[a]\nn = 2.5\n").require("a").get_int("n"), ParseError);
  CHECK_THROWS_AS(kv::Document::parse("[a]\n").require("a").get_double("x"), ParseError);
  CHECK_THROWS_AS(kv::Document::parse("x = 1\n").require("b"), ParseError);
}
