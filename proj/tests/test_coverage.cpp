#include <doctest.h>

#include "culprit/coverage.hpp"
#include "culprit/errors.hpp"

#include "test_util.hpp"

using namespace culprit;
using namespace culprit::coverage;
using testutil::elem;

namespace {

const char* kTwoTestMatrix = R"({
  "tests": [
    {"name": "pkg.A::t1", "outcome": "FAIL",
     "covered": [["src/A.java", 10], ["src/A.java", 11, 8, 20]]},
    {"name": "pkg.B::t2", "outcome": "PASS",
     "covered": [["src/B.java", 3]]}
  ]
})";

}  // namespace

TEST_CASE("matrix json parses tests, outcomes, and optional spans") {
  CoverageMatrix m = parse_matrix_json(kTwoTestMatrix, "inline");
  REQUIRE(m.tests().size() == 2);
  CHECK(m.failing_count() == 1);
  const ElementSet& covered = m.covered("pkg.A::t1");
  REQUIRE(covered.size() == 2);
  auto spanned = covered.find(elem("src/A.java", 11));
  REQUIRE(spanned != covered.end());
  REQUIRE(spanned->enclosing_span.has_value());
  CHECK(spanned->enclosing_span->begin_line == 8);
  CHECK(spanned->enclosing_span->end_line == 20);
}

TEST_CASE("duplicate test names are rejected") {
  const char* doc = R"({"tests": [
    {"name": "t", "outcome": "PASS", "covered": []},
    {"name": "t", "outcome": "FAIL", "covered": []}
  ]})";
  CHECK_THROWS_AS(parse_matrix_json(doc, "inline"), DuplicateTestName);
}

TEST_CASE("malformed documents raise ParseError with the origin") {
  CHECK_THROWS_AS(parse_matrix_json("{not json", "inline"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"tests": [{"name": "t"}]})", "inline"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_matrix_json(
          R"({"tests": [{"name":"t","outcome":"BROKEN","covered":[]}]})",
          "inline"),
      ParseError);
  CHECK_THROWS_AS(
      parse_matrix_json(
          R"({"tests": [{"name":"t","outcome":"PASS","covered":[["f",0]]}]})",
          "inline"),
      ParseError);
}

TEST_CASE("missing coverage file raises ParseError") {
  CHECK_THROWS_AS(
      load_coverage({"/nonexistent/cov.json", Format::MatrixJson}),
      ParseError);
}

TEST_CASE("lcov per-test directory round-trips a hand-written fixture") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.path() / "outcomes.tsv",
                       "pkg.A::t1\tFAIL\n"
                       "pkg.A::t2\tPASS\n"
                       "pkg.B::t3\tPASS\n");
  testutil::write_file(tmp.path() / "pkg.A::t1.lcov",
                       "SF:src/A.java\n"
                       "DA:10,1\n"
                       "DA:11,3\n"
                       "DA:12,0\n"
                       "end_of_record\n");
  testutil::write_file(tmp.path() / "pkg.A::t2.lcov",
                       "SF:src/A.java\n"
                       "DA:10,1\n"
                       "end_of_record\n"
                       "SF:src/B.java\n"
                       "DA:5,2\n"
                       "end_of_record\n");
  testutil::write_file(tmp.path() / "pkg.B::t3.lcov",
                       "SF:src/B.java\n"
                       "DA:5,1\n"
                       "end_of_record\n");

  CoverageMatrix m = load_coverage({tmp.path(), Format::LcovPerTest});
  REQUIRE(m.tests().size() == 3);

  // Hand-derived expectation: hit lines only, per test.
  CHECK(m.covered("pkg.A::t1") ==
        ElementSet{elem("src/A.java", 10), elem("src/A.java", 11)});
  CHECK(m.covered("pkg.A::t2") ==
        ElementSet{elem("src/A.java", 10), elem("src/B.java", 5)});
  CHECK(m.covered("pkg.B::t3") == ElementSet{elem("src/B.java", 5)});
  CHECK(m.failing_count() == 1);
}

TEST_CASE("lcov records without an outcome row are rejected") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.path() / "outcomes.tsv", "known\tPASS\n");
  testutil::write_file(tmp.path() / "unknown.lcov",
                       "SF:a\nDA:1,1\nend_of_record\n");
  CHECK_THROWS_AS(load_coverage({tmp.path(), Format::LcovPerTest}),
                  ParseError);
}

TEST_CASE("relevant test selection keeps matching passing tests") {
  // Shaped like the joda-time example: the failing test covers FieldUtils
  // and IllegalFieldValueException, and passing tests are kept when their
  // full name contains one of those class names.
  CoverageMatrix cov;
  cov.add_test(
      {"org.joda.time.field.TestFieldUtils::testSafeMultiplyLongInt",
       Outcome::Fail},
      {elem("src/org/joda/time/field/FieldUtils.java", 217),
       elem("src/org/joda/time/IllegalFieldValueException.java", 47)});
  cov.add_test({"org.joda.time.field.TestFieldUtils::testSafeAddInt",
                Outcome::Pass},
               {elem("src/org/joda/time/field/FieldUtils.java", 60)});
  cov.add_test(
      {"org.joda.time.TestIllegalFieldValueException::testGJCutover",
       Outcome::Pass},
      {elem("src/org/joda/time/IllegalFieldValueException.java", 47)});
  cov.add_test({"org.example.Unrelated::t", Outcome::Pass},
               {elem("src/org/example/Other.java", 5)});

  CoverageMatrix selected = select_relevant_tests(cov);
  CHECK(selected.tests().size() == 3);
  CHECK(selected.has_test(
      "org.joda.time.field.TestFieldUtils::testSafeMultiplyLongInt"));
  CHECK(selected.has_test(
      "org.joda.time.field.TestFieldUtils::testSafeAddInt"));
  CHECK(selected.has_test(
      "org.joda.time.TestIllegalFieldValueException::testGJCutover"));
  CHECK_FALSE(selected.has_test("org.example.Unrelated::t"));
}

TEST_CASE("failing tests always survive selection even without matches") {
  CoverageMatrix cov;
  cov.add_test({"zzz::fails", Outcome::Fail}, {elem("src/Some.java", 1)});
  cov.add_test({"other::passes", Outcome::Pass}, {elem("src/Isolated.java", 2)});
  CoverageMatrix selected = select_relevant_tests(cov);
  CHECK(selected.has_test("zzz::fails"));
  CHECK_FALSE(selected.has_test("other::passes"));
}

TEST_CASE("selection matching is case-sensitive") {
  CoverageMatrix cov;
  cov.add_test({"f", Outcome::Fail}, {elem("src/FieldUtils.java", 1)});
  cov.add_test({"test.fieldutils::lower", Outcome::Pass}, {});
  CoverageMatrix selected = select_relevant_tests(cov);
  CHECK_FALSE(selected.has_test("test.fieldutils::lower"));
}

TEST_CASE("selection is idempotent and never grows the test set") {
  CoverageMatrix cov;
  cov.add_test({"pkg.TestA::f", Outcome::Fail}, {elem("src/A.java", 1)});
  cov.add_test({"pkg.TestA::p", Outcome::Pass}, {elem("src/A.java", 2)});
  cov.add_test({"pkg.TestB::q", Outcome::Pass}, {elem("src/B.java", 3)});

  CoverageMatrix once = select_relevant_tests(cov);
  CoverageMatrix twice = select_relevant_tests(once);
  REQUIRE(once.tests().size() == twice.tests().size());
  for (const TestCase& t : once.tests()) CHECK(twice.has_test(t.full_name));
  CHECK(once.tests().size() <= cov.tests().size());
}

TEST_CASE("selection requires a failing test") {
  CoverageMatrix cov;
  cov.add_test({"p", Outcome::Pass}, {elem("a.java", 1)});
  CHECK_THROWS_AS(select_relevant_tests(cov), NoFailingTests);
}
