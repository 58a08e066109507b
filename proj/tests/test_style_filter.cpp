#include <doctest.h>

#include "culprit/core.hpp"
#include "culprit/errors.hpp"
#include "culprit/style_filter.hpp"

#include "test_util.hpp"

using namespace culprit;
using namespace culprit::style;
using testutil::elem;
using testutil::ref;

TEST_CASE("elements_touched_by matches a brute-force membership scan") {
  EvolveMap ev;
  const CodeElement e1 = elem("a.java", 1);
  const CodeElement e2 = elem("a.java", 2);
  const CodeElement e3 = elem("b.java", 3);
  ev.set_history(e1, {ref("c2", 20, 2), ref("c1", 10, 1)});
  ev.set_history(e2, {ref("c2", 20, 2)});
  ev.set_history(e3, {ref("c1", 10, 1)});
  const ElementSet ef = {e1, e2, e3};

  CHECK(elements_touched_by("c0", ef, ev).empty());
  CHECK(elements_touched_by("c1", ef, ev) == ElementSet{e1, e3});
  CHECK(elements_touched_by("c2", ef, ev) == ElementSet{e1, e2});

  for (const char* commit : {"c1", "c2", "c0"}) {
    ElementSet brute;
    for (const CodeElement& e : ef)
      for (const CommitRef& r : ev.history(e))
        if (r.id == commit) brute.insert(e);
    CHECK(elements_touched_by(commit, ef, ev) == brute);
  }
}

namespace {

const char* kEscapeV1 =
    "public class Escape {\n"                        // 1
    "    /**\n"                                      // 2
    "     * Worker method.\n"                        // 3
    "     */\n"                                      // 4
    "    public String clean(String str) {\n"        // 5
    "        if (str == null)\n"                     // 6
    "            return null;\n"                     // 7
    "        return str.trim();\n"                   // 8
    "    }\n"                                        // 9
    "}\n";                                           // 10

// Comments reworded, single-statement if body wrapped in braces.
const char* kEscapeV2_style =
    "public class Escape {\n"
    "    /**\n"
    "     * Worker method for cleaning strings.\n"
    "     * Handles null input.\n"
    "     */\n"
    "    public String clean(String str) {\n"
    "        if (str == null) {\n"
    "            return null;\n"
    "        }\n"
    "        return str.trim();\n"
    "    }\n"
    "}\n";

// Same shape but the behaviour changed.
const char* kEscapeV3_semantic =
    "public class Escape {\n"
    "    /**\n"
    "     * Worker method for cleaning strings.\n"
    "     * Handles null input.\n"
    "     */\n"
    "    public String clean(String str) {\n"
    "        if (str == null) {\n"
    "            return \"\";\n"
    "        }\n"
    "        return str.trim();\n"
    "    }\n"
    "}\n";

}  // namespace

TEST_CASE("style detection against a fixture repository") {
  testutil::TempDir tmp;
  testutil::GitRepo repo(tmp.path() / "repo");
  NormalizerRegistry registry;

  repo.write("src/Escape.java", kEscapeV1);
  const std::string c0 = repo.commit("add escape", 1000);
  repo.write("src/Escape.java", kEscapeV2_style);
  const std::string c1 = repo.commit("tidy comments and braces", 2000);
  repo.write("src/Escape.java", kEscapeV3_semantic);
  const std::string c2 = repo.commit("return empty instead of null", 3000);

  history::GitCliAdapter adapter(repo.dir());
  const std::set<std::string> files = {"src/Escape.java"};

  SUBCASE("comment wording plus added braces is a style change") {
    CHECK(is_style_change(c1, files, adapter, "HEAD", registry));
  }
  SUBCASE("behaviour change is not a style change") {
    CHECK_FALSE(is_style_change(c2, files, adapter, "HEAD", registry));
  }
  SUBCASE("creation commit is not a style change") {
    CHECK_FALSE(is_style_change(c0, files, adapter, "HEAD", registry));
  }
}

TEST_CASE("variable rename and statement reorder are semantic") {
  testutil::TempDir tmp;
  testutil::GitRepo repo(tmp.path() / "repo");
  NormalizerRegistry registry;

  repo.write("src/W.java",
             "class W { void go() { int count = 0; use(count); use(count); "
             "a(); b(); } }\n");
  repo.commit("add", 1000);
  repo.write("src/W.java",
             "class W { void go() { int total = 0; use(total); use(total); "
             "a(); b(); } }\n");
  const std::string rename_commit = repo.commit("rename var", 2000);
  repo.write("src/W.java",
             "class W { void go() { int total = 0; use(total); use(total); "
             "b(); a(); } }\n");
  const std::string reorder_commit = repo.commit("reorder calls", 3000);

  history::GitCliAdapter adapter(repo.dir());
  const std::set<std::string> files = {"src/W.java"};
  CHECK_FALSE(is_style_change(rename_commit, files, adapter, "HEAD", registry));
  CHECK_FALSE(is_style_change(reorder_commit, files, adapter, "HEAD", registry));
}

TEST_CASE("reduce_search_space removes exactly the style commits") {
  testutil::TempDir tmp;
  testutil::GitRepo repo(tmp.path() / "repo");
  NormalizerRegistry registry;

  repo.write("src/Escape.java", kEscapeV1);
  const std::string c0 = repo.commit("add escape", 1000);
  repo.write("src/Escape.java", kEscapeV2_style);
  const std::string c1 = repo.commit("style only", 2000);
  repo.write("src/Escape.java", kEscapeV3_semantic);
  const std::string c2 = repo.commit("semantic", 3000);

  history::GitCliAdapter adapter(repo.dir());
  const CodeElement stmt = elem("src/Escape.java", 8, 6, 11);
  EvolveMap ev = history::build_evolve_map(adapter, {stmt}, "HEAD", 1);
  const CommitIdSet cf = {c0, c1, c2};

  ReductionResult result =
      reduce_search_space(cf, {stmt}, ev, adapter, "HEAD", registry);
  CHECK(result.style_commits == CommitIdSet{c1});
  CHECK(result.kept == CommitIdSet{c0, c2});
  CHECK(result.kept.size() + result.style_commits.size() == cf.size());
}

TEST_CASE("no style commits means identity reduction") {
  testutil::TempDir tmp;
  testutil::GitRepo repo(tmp.path() / "repo");
  NormalizerRegistry registry;

  repo.write("src/A.java", "class A { int f() { return 1; } }\n");
  const std::string c0 = repo.commit("v1", 1000);
  repo.write("src/A.java", "class A { int f() { return 2; } }\n");
  const std::string c1 = repo.commit("v2", 2000);

  history::GitCliAdapter adapter(repo.dir());
  const CodeElement stmt = elem("src/A.java", 1, 1, 1);
  EvolveMap ev = history::build_evolve_map(adapter, {stmt}, "HEAD", 1);
  const CommitIdSet cf = candidate_commits_for_test(ev, stmt);

  ReductionResult result =
      reduce_search_space(cf, {stmt}, ev, adapter, "HEAD", registry);
  CHECK(result.kept == cf);
  CHECK(result.style_commits.empty());
}

TEST_CASE("unavailable file contents keep the commit") {
  // A serialized adapter cannot materialize files; nothing is filtered.
  EvolveMap map;
  const CodeElement e = elem("src/A.java", 3);
  map.set_history(e, {ref("c2", 20, 2), ref("c1", 10, 1)});
  history::SerializedAdapter adapter(map);
  NormalizerRegistry registry;

  ReductionResult result = reduce_search_space({"c1", "c2"}, {e}, map, adapter,
                                               "c2", registry);
  CHECK(result.kept == CommitIdSet{"c1", "c2"});
  CHECK(result.style_commits.empty());
  CHECK(result.unverifiable == CommitIdSet{"c1", "c2"});
}

TEST_CASE("a style edit to a covered file hides a semantic edit elsewhere") {
  // The commit touches a covered file with style-only changes and an
  // uncovered file semantically; only covered files count, so it is
  // still a style commit for this failure.
  testutil::TempDir tmp;
  testutil::GitRepo repo(tmp.path() / "repo");
  NormalizerRegistry registry;

  repo.write("src/Covered.java", kEscapeV1);
  repo.write("src/Other.java", "class Other { int g() { return 1; } }\n");
  repo.commit("add", 1000);
  repo.write("src/Covered.java", kEscapeV2_style);
  repo.write("src/Other.java", "class Other { int g() { return 2; } }\n");
  const std::string mixed = repo.commit("mixed", 2000);

  history::GitCliAdapter adapter(repo.dir());
  CHECK(is_style_change(mixed, {"src/Covered.java"}, adapter, "HEAD",
                        registry));
  CHECK_FALSE(is_style_change(mixed, {"src/Covered.java", "src/Other.java"},
                              adapter, "HEAD", registry));
}
