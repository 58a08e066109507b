#include <doctest.h>

#include <random>

#include "culprit/core.hpp"
#include "culprit/errors.hpp"

#include "test_util.hpp"

using namespace culprit;
using testutil::elem;
using testutil::ref;

TEST_CASE("suspicious_elements unions the coverage of failing tests") {
  CoverageMatrix cov;
  cov.add_test({"t.fail", Outcome::Fail}, {elem("a.java", 1), elem("a.java", 2)});
  cov.add_test({"t.pass", Outcome::Pass}, {elem("b.java", 3)});

  ElementSet ef = suspicious_elements(cov);
  CHECK(ef == ElementSet{elem("a.java", 1), elem("a.java", 2)});
}

TEST_CASE("suspicious_elements unions over several failing tests") {
  CoverageMatrix cov;
  cov.add_test({"f1", Outcome::Fail}, {elem("a.java", 1)});
  cov.add_test({"f2", Outcome::Fail}, {elem("a.java", 2)});
  CHECK(suspicious_elements(cov) ==
        ElementSet{elem("a.java", 1), elem("a.java", 2)});
}

TEST_CASE("suspicious_elements with empty failing coverage is empty") {
  CoverageMatrix cov;
  cov.add_test({"f", Outcome::Fail}, {});
  cov.add_test({"p", Outcome::Pass}, {elem("a.java", 1)});
  CHECK(suspicious_elements(cov).empty());
}

TEST_CASE("suspicious_elements requires a failing test") {
  CoverageMatrix cov;
  cov.add_test({"p", Outcome::Pass}, {elem("a.java", 1)});
  CHECK_THROWS_AS(suspicious_elements(cov), NoFailingTests);
}

TEST_CASE("candidate_commits unions and deduplicates histories") {
  EvolveMap ev;
  ev.set_history(elem("a.java", 1), {ref("c3", 30, 3), ref("c1", 10, 1)});
  ev.set_history(elem("a.java", 2), {ref("c2", 20, 2), ref("c1", 10, 1)});

  SUBCASE("single element") {
    CHECK(candidate_commits({elem("a.java", 1)}, ev) ==
          CommitIdSet{"c3", "c1"});
  }
  SUBCASE("union over two elements") {
    CHECK(candidate_commits({elem("a.java", 1), elem("a.java", 2)}, ev) ==
          CommitIdSet{"c1", "c2", "c3"});
  }
  SUBCASE("empty element set") {
    CHECK(candidate_commits({}, ev).empty());
  }
}

TEST_CASE("candidate_commits distinguishes empty history from no entry") {
  EvolveMap ev;
  ev.set_history(elem("a.java", 1), {});
  CHECK(candidate_commits({elem("a.java", 1)}, ev).empty());
  CHECK_THROWS_AS(candidate_commits({elem("b.java", 9)}, ev), MissingHistory);
}

TEST_CASE("element validation enforces line and span invariants") {
  CHECK_THROWS_AS(validate(elem("a.java", 0)), Error);
  CHECK_THROWS_AS(validate(elem("a.java", 5, 6, 9)), Error);
  CHECK_NOTHROW(validate(elem("a.java", 5, 3, 9)));
}

TEST_CASE("histories must be strictly descending with consistent keys") {
  EvolveMap ev;
  CHECK_THROWS_AS(
      ev.set_history(elem("a.java", 1), {ref("c1", 10, 1), ref("c2", 20, 2)}),
      Error);
  ev.set_history(elem("a.java", 2), {ref("c2", 20, 2)});
  CHECK_THROWS_AS(ev.set_history(elem("a.java", 3), {ref("c2", 21, 2)}),
                  Error);
}

TEST_CASE("equal timestamps are ordered by the ingestion sort key") {
  EvolveMap ev;
  ev.set_history(elem("a.java", 1), {ref("c2", 10, 2), ref("c1", 10, 1)});
  CHECK(ev.key_of("c2") > ev.key_of("c1"));
}

// Property: growing the failing set never shrinks E_F, and growing E_F
// never shrinks C_F.
TEST_CASE("stage 1 monotonicity") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> line(1, 20);
  std::uniform_int_distribution<int> count(0, 8);

  for (int trial = 0; trial < 200; ++trial) {
    CoverageMatrix base;
    auto random_set = [&] {
      ElementSet s;
      const int k = count(rng);
      for (int i = 0; i < k; ++i) s.insert(elem("f.java", line(rng)));
      return s;
    };
    base.add_test({"f1", Outcome::Fail}, random_set());
    base.add_test({"p1", Outcome::Pass}, random_set());
    ElementSet ef_before = suspicious_elements(base);

    CoverageMatrix grown = base;
    grown.add_test({"f2", Outcome::Fail}, random_set());
    ElementSet ef_after = suspicious_elements(grown);
    CHECK(std::includes(ef_after.begin(), ef_after.end(), ef_before.begin(),
                        ef_before.end()));

    EvolveMap ev;
    for (int l = 1; l <= 20; ++l) {
      std::vector<CommitRef> hist;
      for (int c = count(rng); c > 0; --c)
        hist.push_back(ref("c" + std::to_string(c), 10 * c, c));
      ev.set_history(elem("f.java", l), std::move(hist));
    }
    CommitIdSet cf_before = candidate_commits(ef_before, ev);
    CommitIdSet cf_after = candidate_commits(ef_after, ev);
    CHECK(std::includes(cf_after.begin(), cf_after.end(), cf_before.begin(),
                        cf_before.end()));
  }
}
