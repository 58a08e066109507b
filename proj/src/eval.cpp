#include "culprit/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "culprit/core.hpp"
#include "culprit/coverage.hpp"
#include "culprit/errors.hpp"
#include "culprit/vcs.hpp"

namespace culprit::eval {

using nlohmann::ordered_json;

double mrr(const std::vector<int>& ranks) {
  if (ranks.empty()) throw EmptyInput("mrr needs at least one rank");
  double sum = 0;
  for (int r : ranks) {
    if (r < 1)
      throw Error(ErrorCode::InvalidModel,
                  "rank must be >= 1, got " + std::to_string(r));
    sum += 1.0 / r;
  }
  return sum / static_cast<double>(ranks.size());
}

int accuracy_at(const std::vector<int>& ranks, int n) {
  if (n < 1)
    throw Error(ErrorCode::InvalidModel, "n must be >= 1");
  int count = 0;
  for (int r : ranks)
    if (r >= 1 && r <= n) ++count;
  return count;
}

double random_baseline_expected_rank(int space_size) {
  if (space_size < 1)
    throw Error(ErrorCode::InvalidModel, "space size must be >= 1");
  return (1.0 + space_size) / 2.0;
}

double random_expected_reciprocal_rank(int space_size) {
  if (space_size < 1)
    throw Error(ErrorCode::InvalidModel, "space size must be >= 1");
  double harmonic = 0;
  for (int k = 1; k <= space_size; ++k) harmonic += 1.0 / k;
  return harmonic / space_size;
}

namespace {

std::string read_file_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

LabelledSubject load_subject(const std::filesystem::path& dir) {
  LabelledSubject subject;
  const auto label_path = dir / "subject.json";
  ordered_json label;
  try {
    label = ordered_json::parse(read_file_or_throw(label_path));
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(e.what(), label_path.string());
  }
  subject.id = label.at("id").get<std::string>();
  subject.true_bic = label.at("true_bic").get<std::string>();
  if (label.contains("style_commits"))
    for (const auto& c : label["style_commits"])
      subject.style_commits.insert(c.get<std::string>());
  if (label.contains("all_commits"))
    for (const auto& c : label["all_commits"])
      subject.all_commits.push_back(
          CommitRef{c.at("id").get<std::string>(),
                    CommitKey{c.at("time").get<std::int64_t>(),
                              c.at("order").get<std::int64_t>()}});

  subject.coverage = coverage::load_coverage(
      {dir / "coverage.json", coverage::Format::MatrixJson});
  subject.history = history::load_evolve_map(dir / "history.json");

  if (subject.all_commits.empty())
    subject.all_commits = subject.history.all_commits();
  std::sort(subject.all_commits.begin(), subject.all_commits.end(),
            [](const CommitRef& a, const CommitRef& b) { return a.key > b.key; });

  bool known = false;
  for (const CommitRef& c : subject.all_commits)
    if (c.id == subject.true_bic) known = true;
  if (!known)
    throw ParseError("true_bic " + subject.true_bic + " is not a known commit",
                     label_path.string());
  return subject;
}

std::vector<LabelledSubject> load_dataset(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> entries;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_directory() &&
        std::filesystem::exists(entry.path() / "subject.json"))
      entries.push_back(entry.path());
  std::sort(entries.begin(), entries.end());
  std::vector<LabelledSubject> subjects;
  for (const auto& e : entries) subjects.push_back(load_subject(e));
  return subjects;
}

namespace {

SubjectOutcome evaluate_subject(const LabelledSubject& subject,
                                const BenchmarkConfig& config) {
  SubjectOutcome outcome;
  outcome.subject = subject.id;
  try {
    CoverageMatrix matrix = config.relevant_test_selection
                                ? coverage::select_relevant_tests(subject.coverage)
                                : subject.coverage;
    const ElementSet ef = suspicious_elements(matrix);
    const CommitIdSet cf = candidate_commits(ef, subject.history);

    CommitIdSet cbic = cf;
    if (!config.skip_stage2)
      for (const std::string& c : subject.style_commits) cbic.erase(c);
    outcome.space_size = static_cast<int>(cbic.size());

    const sbfl::SuspiciousnessMap susp = sbfl::ochiai(matrix);

    auto rank_under = [&](const CommitIdSet& space,
                          const scoring::VotingConfig& vc)
        -> std::pair<int, scoring::ScoreReport> {
      scoring::ScoreReport report =
          scoring::score_commits(susp, subject.history, space, vc, ef);
      int rank = 0;
      if (space.count(subject.true_bic)) rank = report.rank_of(subject.true_bic);
      return {rank, std::move(report)};
    };

    auto [primary_rank, primary_report] = rank_under(cbic, config.voting);
    outcome.rank_by_variant["primary"] = primary_rank;
    outcome.primary_report = std::move(primary_report);

    if (config.run_ablations) {
      outcome.rank_by_variant["skip-stage2"] =
          rank_under(cf, config.voting).first;
      scoring::VotingConfig vc = config.voting;
      vc.mode = scoring::Mode::Equal;
      outcome.rank_by_variant["equal-vote"] = rank_under(cbic, vc).first;
      vc.mode = scoring::Mode::ScoreOnly;
      outcome.rank_by_variant["score-only-vote"] = rank_under(cbic, vc).first;
      vc.mode = scoring::Mode::MaxAggr;
      outcome.rank_by_variant["max-aggr"] = rank_under(cbic, vc).first;
    }

    if (config.run_bisection && primary_rank > 0) {
      std::map<std::string, double> scores;
      for (const scoring::RankedCommit& rc : outcome.primary_report.ranked)
        scores[rc.id] = rc.score;
      auto score_fn = [&scores](const std::string& id) {
        auto it = scores.find(id);
        return it == scores.end() ? 0.0 : it->second;
      };
      outcome.costs =
          bisect::compare_costs(subject.all_commits, score_fn, subject.true_bic);
      outcome.bisected = true;
    }
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace

const AggregateRow& BenchmarkReport::row(const std::string& variant) const {
  for (const AggregateRow& r : rows)
    if (r.variant == variant) return r;
  throw Error(ErrorCode::InvalidModel, "no aggregate row '" + variant + "'");
}

BenchmarkReport run_benchmark(const std::vector<LabelledSubject>& subjects,
                              const BenchmarkConfig& config) {
  config.voting.validate();
  BenchmarkReport report;
  report.subjects.resize(subjects.size());

  unsigned workers = config.workers;
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, subjects.empty() ? 1 : subjects.size());

  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= subjects.size()) return;
      report.subjects[i] = evaluate_subject(subjects[i], config);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  // Aggregate over subjects that evaluated cleanly.
  std::vector<const SubjectOutcome*> ok;
  for (const SubjectOutcome& s : report.subjects)
    if (s.ok) ok.push_back(&s);

  std::vector<std::string> variants;
  if (!ok.empty())
    for (const auto& [variant, rank] : ok.front()->rank_by_variant)
      variants.push_back(variant);

  for (const std::string& variant : variants) {
    AggregateRow row;
    row.variant = variant;
    double reciprocal_sum = 0;
    for (const SubjectOutcome* s : ok) {
      const int rank = s->rank_by_variant.at(variant);
      if (rank >= 1) reciprocal_sum += 1.0 / rank;
      for (int n : config.accuracy_ns)
        if (rank >= 1 && rank <= n) row.accuracy[n] += 1;
    }
    row.mrr = ok.empty() ? 0 : reciprocal_sum / ok.size();
    for (int n : config.accuracy_ns) row.accuracy.emplace(n, 0.0);
    report.rows.push_back(std::move(row));
  }

  AggregateRow random_row{"random", 0, {}};
  AggregateRow bound_row{"lower-bound", 0, {}};
  double random_sum = 0, bound_sum = 0;
  for (const SubjectOutcome* s : ok) {
    const int size = std::max(1, s->space_size);
    random_sum += random_expected_reciprocal_rank(size);
    bound_sum += 1.0 / size;
    for (int n : config.accuracy_ns) {
      random_row.accuracy[n] += std::min(n, size) / static_cast<double>(size);
      bound_row.accuracy[n] += size <= n ? 1 : 0;
    }
  }
  if (!ok.empty()) {
    random_row.mrr = random_sum / ok.size();
    bound_row.mrr = bound_sum / ok.size();
  }
  report.rows.push_back(std::move(random_row));
  report.rows.push_back(std::move(bound_row));
  return report;
}

std::string BenchmarkReport::to_csv() const {
  std::ostringstream out;
  out << "subject,variant,rank,space_size,weighted_iters,standard_iters_"
         "reduced,standard_iters_full,error\n";
  for (const SubjectOutcome& s : subjects) {
    if (!s.ok) {
      std::string msg = s.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << s.subject << ",,,,,,," << msg << "\n";
      continue;
    }
    for (const auto& [variant, rank] : s.rank_by_variant) {
      out << s.subject << "," << variant << "," << rank << "," << s.space_size
          << ",";
      if (s.bisected && variant == "primary")
        out << s.costs.weighted_iters << "," << s.costs.standard_iters_reduced
            << "," << s.costs.standard_iters_full;
      else
        out << ",,";
      out << ",\n";
    }
  }
  return out.str();
}

std::string BenchmarkReport::to_json() const {
  ordered_json subjects_json = ordered_json::array();
  for (const SubjectOutcome& s : subjects) {
    ordered_json entry = {{"subject", s.subject}, {"ok", s.ok}};
    if (!s.ok) {
      entry["error"] = s.error;
    } else {
      entry["space_size"] = s.space_size;
      ordered_json ranks = ordered_json::object();
      for (const auto& [variant, rank] : s.rank_by_variant)
        ranks[variant] = rank;
      entry["ranks"] = std::move(ranks);
      if (s.bisected)
        entry["bisection"] = {
            {"weighted_iters", s.costs.weighted_iters},
            {"standard_iters_reduced", s.costs.standard_iters_reduced},
            {"standard_iters_full", s.costs.standard_iters_full}};
    }
    subjects_json.push_back(std::move(entry));
  }
  ordered_json rows_json = ordered_json::array();
  for (const AggregateRow& r : rows) {
    ordered_json acc = ordered_json::object();
    for (const auto& [n, count] : r.accuracy)
      acc["@" + std::to_string(n)] = count;
    rows_json.push_back(
        {{"variant", r.variant}, {"mrr", r.mrr}, {"accuracy", std::move(acc)}});
  }
  return ordered_json{{"subjects", std::move(subjects_json)},
                      {"aggregates", std::move(rows_json)}}
             .dump(2) +
         "\n";
}

SyntheticCase make_recency_biased_case(std::mt19937_64& rng,
                                       const BiasParams& params) {
  SyntheticCase result;
  std::uniform_int_distribution<int> space_dist(params.min_space,
                                                params.max_space);
  const int reduced_size = space_dist(rng);
  const int full_size = params.full_multiplier * reduced_size;

  result.commits.reserve(full_size);
  for (int i = 0; i < full_size; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "c%05d", i);
    result.commits.push_back(CommitRef{
        id, CommitKey{1000000 - 10 * i, full_size - i}});
  }

  // Scatter the reduced space over the history, always keeping a small
  // cluster of the most recent commits in it so the score mass sits at
  // the recent end.
  std::vector<int> chosen;
  const int cluster = std::min(4, reduced_size);
  for (int i = 0; i < cluster; ++i) chosen.push_back(i);
  std::vector<int> rest;
  for (int i = cluster; i < full_size; ++i) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (int k = 0; k < reduced_size - cluster; ++k) chosen.push_back(rest[k]);
  std::sort(chosen.begin(), chosen.end());

  std::uniform_real_distribution<double> jitter(1.0 - params.noise,
                                                1.0 + params.noise);
  std::vector<std::pair<double, std::string>> scored;
  for (size_t j = 0; j < chosen.size(); ++j) {
    const double score =
        std::exp(-params.decay * static_cast<double>(j)) * jitter(rng);
    const std::string& id = result.commits[chosen[j]].id;
    result.scores[id] = score;
    scored.emplace_back(score, id);
  }

  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  const int top = std::min<int>(params.max_culprit_rank,
                                static_cast<int>(scored.size()));
  std::uniform_int_distribution<int> pick(0, top - 1);
  const int culprit_pos = pick(rng);
  result.planted_culprit = scored[culprit_pos].second;
  // Max-tiebreak rank; continuous jitter makes ties vanishingly rare but
  // compute it honestly anyway.
  int rank = 0;
  for (const auto& [score, id] : scored)
    if (score >= scored[culprit_pos].first) ++rank;
  result.culprit_rank = rank;
  return result;
}

void write_synthetic_subject(const std::filesystem::path& dir,
                             const std::string& id, std::mt19937_64& rng,
                             int commits, int elements, int passing_tests) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::vector<CommitRef> refs;
  for (int i = 0; i < commits; ++i) {
    char cid[16];
    std::snprintf(cid, sizeof cid, "s%04d", i);
    refs.push_back(CommitRef{cid, CommitKey{500000 - 100 * i, commits - i}});
  }

  // Every commit lands in at least one element history; extras at random.
  EvolveMap map;
  std::vector<CodeElement> elems;
  std::vector<std::vector<CommitRef>> hists(elements);
  for (int e = 0; e < elements; ++e) {
    elems.push_back(CodeElement{
        "src/Mod" + std::to_string(e) + ".java", 10 + e, std::nullopt});
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int c = 0; c < commits; ++c) {
    hists[c % elements].push_back(refs[c]);
    for (int e = 0; e < elements; ++e)
      if (e != c % elements && coin(rng) < 0.25) hists[e].push_back(refs[c]);
  }
  for (int e = 0; e < elements; ++e) {
    std::sort(hists[e].begin(), hists[e].end(),
              [](const CommitRef& a, const CommitRef& b) { return a.key > b.key; });
    map.set_history(elems[e], hists[e]);
  }

  ordered_json tests = ordered_json::array();
  ordered_json failing_covered = ordered_json::array();
  for (const CodeElement& e : elems) failing_covered.push_back({e.file, e.line});
  tests.push_back({{"name", "suite.Failing::t"},
                   {"outcome", "FAIL"},
                   {"covered", std::move(failing_covered)}});
  for (int p = 0; p < passing_tests; ++p) {
    ordered_json covered = ordered_json::array();
    for (const CodeElement& e : elems)
      if (coin(rng) < 0.5) covered.push_back({e.file, e.line});
    tests.push_back({{"name", "suite.Mod" + std::to_string(p % elements) +
                                  "Test::t" + std::to_string(p)},
                     {"outcome", "PASS"},
                     {"covered", std::move(covered)}});
  }

  std::ofstream(dir / "coverage.json")
      << ordered_json{{"tests", std::move(tests)}}.dump(2) << "\n";
  history::write_evolve_map(dir / "history.json", map);

  // Label the newest commit of the first element's history.
  const std::string true_bic = hists[0].front().id;
  std::ofstream(dir / "subject.json")
      << ordered_json{{"id", id}, {"true_bic", true_bic}}.dump(2) << "\n";
}

}  // namespace culprit::eval
