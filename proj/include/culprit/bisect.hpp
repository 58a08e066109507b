#pragma once

/*
    Bisection over scored commits. The weighted variant picks the pivot
    that best halves the remaining score mass rather than the remaining
    commit count; with all-equal positive scores it reproduces standard
    bisection exactly.
*/

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "culprit/types.hpp"

namespace culprit::bisect {

enum class Verdict { Good, Bad };

// Decides whether the snapshot at a commit contains the bug. Must be
// deterministic for a commit within one search.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Verdict probe(const CommitRef& commit) = 0;  // may throw OracleAbort
};

// Precomputed verdicts, mainly for simulation. Missing commit -> abort.
class TableOracle : public Oracle {
 public:
  explicit TableOracle(std::map<std::string, Verdict> verdicts)
      : verdicts_(std::move(verdicts)) {}
  Verdict probe(const CommitRef& commit) override;

 private:
  std::map<std::string, Verdict> verdicts_;
};

// Monotone verdicts derived from a planted culprit: every commit at or
// after it (by key) is bad, everything older is good.
class PlantedOracle : public Oracle {
 public:
  explicit PlantedOracle(CommitKey culprit_key) : culprit_key_(culprit_key) {}
  Verdict probe(const CommitRef& commit) override {
    return commit.key >= culprit_key_ ? Verdict::Bad : Verdict::Good;
  }

 private:
  CommitKey culprit_key_;
};

// Checks out the commit in a scratch git worktree and runs a command with
// {commit} substituted; exit 0 = good, 1 = bad, anything else aborts.
class CommandOracle : public Oracle {
 public:
  CommandOracle(std::filesystem::path repo_root, std::string command_template,
                std::string git_binary = {});
  Verdict probe(const CommitRef& commit) override;

 private:
  std::filesystem::path root_;
  std::string template_;
  std::string git_;
};

// Prompts `good/bad/abort` per probe on the given streams.
class InteractiveOracle : public Oracle {
 public:
  InteractiveOracle(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  Verdict probe(const CommitRef& commit) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

struct ProbeRecord {
  std::string commit;
  int index = 0;  // position in the newest-first candidate list
  Verdict verdict = Verdict::Good;
};

struct BisectResult {
  std::string culprit;
  int iterations = 0;  // oracle calls
  std::vector<ProbeRecord> trace;
};

struct BisectOptions {
  // With a single candidate the loop never probes; spend one oracle call
  // to confirm it anyway. A good verdict there violates the precondition
  // that the culprit is in the space and raises InconsistentOracle.
  bool confirm_single_candidate = true;
};

using ScoreFn = std::function<double(const std::string& commit_id)>;

// Algorithm: drop zero-score commits, order the rest newest first, then
// repeatedly probe the pivot minimizing |left score sum - right score sum|
// (right includes the pivot; ties go to the more recent side) until the
// known-bad index is adjacent to the known-good bound. Throws EmptySpace
// when no commit has a positive score.
BisectResult weighted_bisect(const std::vector<CommitRef>& commits,
                             const ScoreFn& score, Oracle& oracle,
                             const BisectOptions& options = {});

// Midpoint pivots over all commits (uniform weights).
BisectResult standard_bisect(const std::vector<CommitRef>& commits,
                             Oracle& oracle,
                             const BisectOptions& options = {});

struct CostComparison {
  int weighted_iters = 0;          // weighted on the positive-score space
  int standard_iters_reduced = 0;  // standard on the positive-score space
  int standard_iters_full = 0;     // standard on all commits
};

// Simulates all three searches against a planted culprit. The culprit
// must have a positive score.
CostComparison compare_costs(const std::vector<CommitRef>& commits,
                             const ScoreFn& score,
                             const std::string& planted_culprit);

}  // namespace culprit::bisect
