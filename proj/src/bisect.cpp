#include "culprit/bisect.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <istream>
#include <ostream>
#include <random>

#include "culprit/errors.hpp"
#include "culprit/subprocess.hpp"

namespace culprit::bisect {

Verdict TableOracle::probe(const CommitRef& commit) {
  auto it = verdicts_.find(commit.id);
  if (it == verdicts_.end())
    throw OracleAbort("no verdict for commit " + commit.id);
  return it->second;
}

CommandOracle::CommandOracle(std::filesystem::path repo_root,
                             std::string command_template,
                             std::string git_binary)
    : root_(std::move(repo_root)), template_(std::move(command_template)) {
  if (git_binary.empty()) {
    const char* env = std::getenv("CULPRIT_VCS");
    git_ = env && *env ? env : "git";
  } else {
    git_ = std::move(git_binary);
  }
}

Verdict CommandOracle::probe(const CommitRef& commit) {
  namespace fs = std::filesystem;
  std::random_device rd;
  fs::path worktree = fs::temp_directory_path() /
                      ("culprit-probe-" + commit.id.substr(0, 12) + "-" +
                       std::to_string(rd()));

  CommandResult added = run_command(shell_command(
      {git_, "-C", root_.string(), "worktree", "add", "--detach",
       worktree.string(), commit.id}));
  if (added.exit_code != 0)
    throw VcsError("worktree add failed for " + commit.id + ":\n" +
                   added.output);

  std::string cmd = template_;
  for (size_t pos; (pos = cmd.find("{commit}")) != std::string::npos;)
    cmd.replace(pos, 8, commit.id);
  CommandResult probe_result =
      run_command("cd " + shell_quote(worktree.string()) + " && (" + cmd + ")");

  run_command(shell_command({git_, "-C", root_.string(), "worktree", "remove",
                             "--force", worktree.string()}));
  std::error_code ec;
  fs::remove_all(worktree, ec);

  if (probe_result.exit_code == 0) return Verdict::Good;
  if (probe_result.exit_code == 1) return Verdict::Bad;
  throw OracleAbort("probe command exited with " +
                    std::to_string(probe_result.exit_code) + " for " +
                    commit.id + ":\n" + probe_result.output);
}

Verdict InteractiveOracle::probe(const CommitRef& commit) {
  for (;;) {
    out_ << "is commit " << commit.id << " good or bad? [good/bad/abort] "
         << std::flush;
    std::string answer;
    if (!std::getline(in_, answer))
      throw OracleAbort("input closed during interactive bisection");
    if (answer == "good" || answer == "g") return Verdict::Good;
    if (answer == "bad" || answer == "b") return Verdict::Bad;
    if (answer == "abort" || answer == "q")
      throw OracleAbort("aborted by user");
    out_ << "unrecognized answer '" << answer << "'\n";
  }
}

namespace {

struct Search {
  std::vector<CommitRef> ordered;  // newest first
  std::vector<double> prefix;      // prefix[i] = sum of scores before index i

  double range_sum(int from, int to_exclusive) const {
    return prefix[to_exclusive] - prefix[from];
  }
};

Search prepare(const std::vector<CommitRef>& commits, const ScoreFn& score) {
  Search s;
  for (const CommitRef& c : commits) {
    if (score(c.id) > 0.0) s.ordered.push_back(c);
  }
  if (s.ordered.empty())
    throw EmptySpace("no commit with a positive score to bisect");
  std::sort(s.ordered.begin(), s.ordered.end(),
            [](const CommitRef& a, const CommitRef& b) { return a.key > b.key; });
  s.prefix.resize(s.ordered.size() + 1, 0.0);
  for (size_t i = 0; i < s.ordered.size(); ++i)
    s.prefix[i + 1] = s.prefix[i] + score(s.ordered[i].id);
  return s;
}

using PivotRule = std::function<int(const Search&, int bad, int good)>;

int weighted_pivot(const Search& s, int bad, int good) {
  int best = bad + 1;
  double best_diff = std::numeric_limits<double>::infinity();
  for (int i = bad + 1; i <= good - 1; ++i) {
    // Left side excludes the pivot, right side includes it.
    const double diff =
        std::abs(s.range_sum(bad, i) - s.range_sum(i, good));
    if (diff < best_diff) {
      best_diff = diff;
      best = i;
    }
  }
  return best;
}

int midpoint_pivot(const Search&, int bad, int good) {
  return (bad + good) / 2;
}

BisectResult run_bisection(const Search& s, Oracle& oracle,
                           const PivotRule& pivot_rule,
                           const BisectOptions& options) {
  BisectResult result;
  int bad = 0;
  int good = static_cast<int>(s.ordered.size());

  if (good == 1 && options.confirm_single_candidate) {
    Verdict v = oracle.probe(s.ordered[0]);
    result.trace.push_back({s.ordered[0].id, 0, v});
    ++result.iterations;
    if (v == Verdict::Good)
      throw InconsistentOracle(
          "single candidate " + s.ordered[0].id +
          " reported good, but the culprit must be in the space");
  }

  while (good > bad + 1) {
    const int pivot = pivot_rule(s, bad, good);
    Verdict v = oracle.probe(s.ordered[pivot]);
    result.trace.push_back({s.ordered[pivot].id, pivot, v});
    ++result.iterations;
    if (v == Verdict::Bad)
      bad = pivot;
    else
      good = pivot;
  }
  result.culprit = s.ordered[bad].id;
  return result;
}

}  // namespace

BisectResult weighted_bisect(const std::vector<CommitRef>& commits,
                             const ScoreFn& score, Oracle& oracle,
                             const BisectOptions& options) {
  return run_bisection(prepare(commits, score), oracle, weighted_pivot,
                       options);
}

BisectResult standard_bisect(const std::vector<CommitRef>& commits,
                             Oracle& oracle, const BisectOptions& options) {
  auto uniform = [](const std::string&) { return 1.0; };
  return run_bisection(prepare(commits, uniform), oracle, midpoint_pivot,
                       options);
}

CostComparison compare_costs(const std::vector<CommitRef>& commits,
                             const ScoreFn& score,
                             const std::string& planted_culprit) {
  CommitKey culprit_key{};
  bool found = false;
  for (const CommitRef& c : commits) {
    if (c.id == planted_culprit) {
      culprit_key = c.key;
      found = true;
      break;
    }
  }
  if (!found) throw UnknownCommit(planted_culprit);

  BisectOptions no_confirm;
  no_confirm.confirm_single_candidate = false;

  CostComparison costs;
  {
    PlantedOracle oracle(culprit_key);
    costs.weighted_iters =
        weighted_bisect(commits, score, oracle, no_confirm).iterations;
  }
  {
    // Standard search restricted to the same reduced space.
    std::vector<CommitRef> reduced;
    for (const CommitRef& c : commits)
      if (score(c.id) > 0.0) reduced.push_back(c);
    PlantedOracle oracle(culprit_key);
    costs.standard_iters_reduced =
        standard_bisect(reduced, oracle, no_confirm).iterations;
  }
  {
    PlantedOracle oracle(culprit_key);
    costs.standard_iters_full =
        standard_bisect(commits, oracle, no_confirm).iterations;
  }
  return costs;
}

}  // namespace culprit::bisect
