#pragma once

/*
    Benchmark harness: replays the ranking pipeline and the bisection cost
    comparison over labelled subjects (self-contained directories with
    coverage, serialized history, and the known culprit commit), and
    aggregates ranking metrics.

    Subject directory layout:
      subject.json   {"id":str,"true_bic":str,
                      "style_commits":[ids]?,          // precomputed stage 2
                      "all_commits":[{id,time,order}]?} // full history C
      coverage.json  MATRIX_JSON
      history.json   serialized EvolveMap
*/

#include <filesystem>
#include <random>

#include "culprit/bisect.hpp"
#include "culprit/scorer.hpp"
#include "culprit/types.hpp"

namespace culprit::eval {

// Mean of 1/rank. Ranks are 1-based; throws EmptyInput on an empty list.
double mrr(const std::vector<int>& ranks);

// Count of ranks within the top n.
int accuracy_at(const std::vector<int>& ranks, int n);

// Expected rank of the culprit under uniform shuffling of a space of the
// given size: (1 + n) / 2.
double random_baseline_expected_rank(int space_size);

// Expected reciprocal rank under the same shuffle: H(n) / n.
double random_expected_reciprocal_rank(int space_size);

struct LabelledSubject {
  std::string id;
  CoverageMatrix coverage;
  EvolveMap history;
  std::string true_bic;
  CommitIdSet style_commits;             // may be empty
  std::vector<CommitRef> all_commits;    // full C; derived from history if absent
};

LabelledSubject load_subject(const std::filesystem::path& dir);
std::vector<LabelledSubject> load_dataset(const std::filesystem::path& dir);

struct BenchmarkConfig {
  scoring::VotingConfig voting;  // configuration of the primary variant
  bool relevant_test_selection = true;
  bool skip_stage2 = false;      // ignore style_commits even when present
  bool run_ablations = true;
  bool run_bisection = true;
  std::vector<int> accuracy_ns = {1, 2, 3, 5, 10};
  unsigned workers = 0;          // 0 = hardware concurrency
};

struct SubjectOutcome {
  std::string subject;
  bool ok = false;
  std::string error;
  int space_size = 0;                         // |C_BIC|
  std::map<std::string, int> rank_by_variant; // 0 = culprit not in space
  bool bisected = false;
  bisect::CostComparison costs;
  scoring::ScoreReport primary_report;
};

struct AggregateRow {
  std::string variant;
  double mrr = 0;
  // n -> subjects within top n; fractional for the expectation rows.
  std::map<int, double> accuracy;
};

struct BenchmarkReport {
  std::vector<SubjectOutcome> subjects;
  std::vector<AggregateRow> rows;

  const AggregateRow& row(const std::string& variant) const;
  std::string to_csv() const;
  std::string to_json() const;
};

// Runs every subject (in parallel, failures isolated), then aggregates.
// Rows: the primary variant, ablations (skip-stage2, equal, score-only,
// max-aggr), the random baseline, and the theoretical lower bound that
// puts the culprit at the worst rank of its space.
BenchmarkReport run_benchmark(const std::vector<LabelledSubject>& subjects,
                              const BenchmarkConfig& config);

// ---- synthetic subjects ----

struct BiasParams {
  int min_space = 8;          // |C_BIC| lower bound
  int max_space = 32;
  int full_multiplier = 4;    // |C| >= multiplier * |C_BIC|
  double decay = 1.0;         // score of k-th newest ~ exp(-decay * k)
  double noise = 0.1;         // multiplicative jitter
  int max_culprit_rank = 3;   // plant the culprit within this score rank
};

struct SyntheticCase {
  std::vector<CommitRef> commits;         // full history
  std::map<std::string, double> scores;   // positive on the reduced space
  std::string planted_culprit;
  int culprit_rank = 0;                   // max-tiebreak rank by score
};

// Recency-biased score distribution over a scattered reduced space, with
// the culprit planted among the top-ranked commits.
SyntheticCase make_recency_biased_case(std::mt19937_64& rng,
                                       const BiasParams& params);

// Materializes a small randomized subject directory that exercises the
// whole pipeline (coverage + history + label).
void write_synthetic_subject(const std::filesystem::path& dir,
                             const std::string& id, std::mt19937_64& rng,
                             int commits, int elements, int passing_tests);

}  // namespace culprit::eval
