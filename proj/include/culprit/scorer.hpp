#pragma once

/*
    Stage 3: rank-based voting with depth decay. Each failure-covered
    element casts (alpha*susp + (1-alpha))/rank votes to the commits in its
    history, damped by (1-lambda)^depth where depth counts the newer
    in-space commits of that element. Baseline modes replace the vote or
    the aggregation for ablation studies.
*/

#include <map>
#include <string>
#include <vector>

#include "culprit/sbfl.hpp"
#include "culprit/types.hpp"

namespace culprit::scoring {

enum class Mode { Vote, Equal, ScoreOnly, MaxAggr };

struct VotingConfig {
  int alpha = 0;                        // 0 or 1
  sbfl::TieBreak tau = sbfl::TieBreak::Max;
  double lambda = 0.1;                  // in [0, 1)
  Mode mode = Mode::Vote;

  void validate() const;  // throws ConfigError
};

const char* mode_name(Mode mode);
const char* tie_break_name(sbfl::TieBreak tau);

// Voting power of one ranked element.
double vote(const CodeElement& e, const sbfl::SuspiciousnessMap& susp,
            const sbfl::Ranks& ranks, const VotingConfig& config);

// Number of commits in cbic that touch e and are strictly newer than
// `commit` (time order, ties broken by the ingestion sort key).
int depth(const CodeElement& e, const std::string& commit, const EvolveMap& ev,
          const CommitIdSet& cbic);

// Score of one commit in cbic over the elements it touches.
double commit_score(const std::string& commit,
                    const sbfl::SuspiciousnessMap& susp,
                    const sbfl::Ranks& ranks, const EvolveMap& ev,
                    const CommitIdSet& cbic, const VotingConfig& config,
                    const ElementSet& ef);

struct VoteDetail {
  CodeElement element;
  double vote = 0;
  int depth = 0;
  double contribution = 0;  // vote * (1-lambda)^depth
};

struct RankedCommit {
  std::string id;
  double score = 0;
  int rank = 0;  // max-tiebreak
  CommitKey key;
};

struct ScoreReport {
  std::vector<RankedCommit> ranked;  // exactly C_BIC, best first
  std::map<std::string, std::vector<VoteDetail>> per_commit_votes;
  VotingConfig config;
  // Every commit outside C_BIC scores 0; recorded explicitly so consumers
  // of the report need not re-derive the piecewise definition.
  bool zero_score_tail = true;

  int rank_of(const std::string& commit_id) const;  // UnknownCommit
};

// Max-tiebreak ranking of scored commits; ties share the worst position,
// display order is score desc then commit key desc.
ScoreReport rank_commits(const std::map<std::string, double>& scores,
                         const EvolveMap& ev, const VotingConfig& config);

// Full stage 3: scores every commit of cbic and assembles the report with
// per-element vote provenance.
ScoreReport score_commits(const sbfl::SuspiciousnessMap& susp,
                          const EvolveMap& ev, const CommitIdSet& cbic,
                          const VotingConfig& config, const ElementSet& ef);

std::string report_to_json(const ScoreReport& report, bool explain);
std::string report_to_csv(const ScoreReport& report);
ScoreReport report_from_json(const std::string& text,
                             const std::string& origin);

}  // namespace culprit::scoring
