#pragma once

/*
    Shared domain model: code elements, tests, coverage, commits, and the
    per-element change histories (the Cover and Evolve relations). All types
    are immutable once built and safe to share across threads.
*/

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "culprit/errors.hpp"

namespace culprit {

// Inclusive 1-based line range of an enclosing method/function body.
struct LineSpan {
  int begin_line = 0;
  int end_line = 0;

  friend auto operator<=>(const LineSpan&, const LineSpan&) = default;
};

// A statement in the snapshot under test. Identity is (file, line); the
// enclosing span is auxiliary data for history tracing and never takes
// part in comparisons.
struct CodeElement {
  std::string file;  // repository-relative path
  int line = 0;      // 1-based
  std::optional<LineSpan> enclosing_span;

  friend bool operator==(const CodeElement& a, const CodeElement& b) {
    return a.line == b.line && a.file == b.file;
  }
  friend bool operator<(const CodeElement& a, const CodeElement& b) {
    if (a.file != b.file) return a.file < b.file;
    return a.line < b.line;
  }
};

// Throws InvalidModel unless line >= 1 and the span (if any) contains line.
void validate(const CodeElement& element);

enum class Outcome { Pass, Fail };

struct TestCase {
  std::string full_name;  // hierarchical, e.g. package.Class::method
  Outcome outcome = Outcome::Pass;
};

using ElementSet = std::set<CodeElement>;

// Per-test outcomes plus the set of elements each test covers. A (test,
// element) pair is in the Cover relation iff element is in covered(test).
class CoverageMatrix {
 public:
  CoverageMatrix() = default;

  // Throws DuplicateTestName / InvalidModel on invariant violations.
  void add_test(TestCase test, ElementSet covered);

  const std::vector<TestCase>& tests() const { return tests_; }
  const ElementSet& covered(const std::string& test_name) const;
  bool has_test(const std::string& test_name) const;

  std::vector<const TestCase*> failing_tests() const;
  size_t failing_count() const;

  // Union of covered sets over all tests.
  ElementSet all_elements() const;

 private:
  std::vector<TestCase> tests_;
  std::map<std::string, ElementSet> covered_;
};

// Strict total order over commits: committer time, with ties broken by a
// stable per-history integer captured at ingestion (topological position
// for the git adapter). Greater key = newer commit.
struct CommitKey {
  std::int64_t time = 0;   // seconds since epoch
  std::int64_t order = 0;  // tie-breaker, larger = newer

  friend auto operator<=>(const CommitKey&, const CommitKey&) = default;
};

struct CommitRef {
  std::string id;
  CommitKey key;

  friend bool operator==(const CommitRef& a, const CommitRef& b) {
    return a.id == b.id;
  }
};

// One line-range hunk of a file change: [old_start, old_start+old_count)
// before the commit maps to [new_start, new_start+new_count) after it.
struct Hunk {
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
};

struct FileChange {
  std::string old_path;  // empty for added files
  std::string new_path;  // empty for deleted files
  std::vector<Hunk> hunks;
};

struct CommitRecord {
  std::string id;
  CommitKey key;
  std::string message;
  std::vector<FileChange> changed_files;

  std::int64_t time() const { return key.time; }
};

using CommitIdSet = std::set<std::string>;

// The Evolve relation: for each element, the commits in the change history
// of its enclosing method, newest first. (c, e) is in Evolve iff c appears
// in history(e).
class EvolveMap {
 public:
  // History must be strictly descending by commit key; a commit id seen
  // twice must carry the same key everywhere. Throws InvalidModel.
  void set_history(const CodeElement& element, std::vector<CommitRef> history);

  bool has(const CodeElement& element) const;
  const std::vector<CommitRef>& history(const CodeElement& element) const;
  const std::map<CodeElement, std::vector<CommitRef>>& histories() const {
    return history_;
  }

  bool contains_pair(const std::string& commit_id,
                     const CodeElement& element) const;

  // Key of a commit seen in any history. Throws UnknownCommit.
  const CommitKey& key_of(const std::string& commit_id) const;
  bool knows_commit(const std::string& commit_id) const;

  // All commits appearing in any history, no duplicates.
  std::vector<CommitRef> all_commits() const;

 private:
  std::map<CodeElement, std::vector<CommitRef>> history_;
  std::map<std::string, CommitKey> keys_;
};

}  // namespace culprit
