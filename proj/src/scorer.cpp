#include "culprit/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "culprit/errors.hpp"

namespace culprit::scoring {

using nlohmann::ordered_json;

void VotingConfig::validate() const {
  if (alpha != 0 && alpha != 1)
    throw ConfigError("alpha must be 0 or 1, got " + std::to_string(alpha));
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw ConfigError("lambda must be in [0, 1), got " +
                      std::to_string(lambda));
}

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Vote: return "vote";
    case Mode::Equal: return "equal";
    case Mode::ScoreOnly: return "score-only";
    case Mode::MaxAggr: return "max-aggr";
  }
  return "unknown";
}

const char* tie_break_name(sbfl::TieBreak tau) {
  return tau == sbfl::TieBreak::Max ? "max" : "dense";
}

double vote(const CodeElement& e, const sbfl::SuspiciousnessMap& susp,
            const sbfl::Ranks& ranks, const VotingConfig& config) {
  auto rank_it = ranks.find(e);
  if (rank_it == ranks.end())
    throw EmptyDomain("element " + e.file + ":" + std::to_string(e.line) +
                      " has no rank");
  const double numerator =
      config.alpha * susp.scores.at(e) + (1 - config.alpha) * 1.0;
  return numerator / rank_it->second;
}

int depth(const CodeElement& e, const std::string& commit, const EvolveMap& ev,
          const CommitIdSet& cbic) {
  const CommitKey& key = ev.key_of(commit);
  int count = 0;
  for (const CommitRef& other : ev.history(e)) {
    if (!cbic.count(other.id)) continue;
    if (other.key > key) ++count;
  }
  return count;
}

double commit_score(const std::string& commit,
                    const sbfl::SuspiciousnessMap& susp,
                    const sbfl::Ranks& ranks, const EvolveMap& ev,
                    const CommitIdSet& cbic, const VotingConfig& config,
                    const ElementSet& ef) {
  double total = 0.0;
  double max_susp = 0.0;
  bool any = false;
  for (const CodeElement& e : ef) {
    if (!ev.contains_pair(commit, e)) continue;
    any = true;
    if (config.mode == Mode::MaxAggr) {
      max_susp = std::max(max_susp, susp.scores.at(e));
      continue;
    }
    double weight = 0.0;
    switch (config.mode) {
      case Mode::Vote: weight = vote(e, susp, ranks, config); break;
      case Mode::Equal: weight = 1.0; break;
      case Mode::ScoreOnly: weight = susp.scores.at(e); break;
      case Mode::MaxAggr: break;
    }
    total += weight * std::pow(1.0 - config.lambda, depth(e, commit, ev, cbic));
  }
  if (config.mode == Mode::MaxAggr) return any ? max_susp : 0.0;
  return total;
}

namespace {

void assign_max_tiebreak_ranks(std::vector<RankedCommit>& ranked) {
  size_t i = 0;
  while (i < ranked.size()) {
    size_t j = i;
    while (j < ranked.size() && ranked[j].score == ranked[i].score) ++j;
    for (size_t k = i; k < j; ++k) ranked[k].rank = static_cast<int>(j);
    i = j;
  }
}

}  // namespace

ScoreReport rank_commits(const std::map<std::string, double>& scores,
                         const EvolveMap& ev, const VotingConfig& config) {
  ScoreReport report;
  report.config = config;
  for (const auto& [id, score] : scores)
    report.ranked.push_back(RankedCommit{id, score, 0, ev.key_of(id)});
  std::sort(report.ranked.begin(), report.ranked.end(),
            [](const RankedCommit& a, const RankedCommit& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.key > b.key;  // newer first among ties, display only
            });
  assign_max_tiebreak_ranks(report.ranked);
  return report;
}

int ScoreReport::rank_of(const std::string& commit_id) const {
  for (const RankedCommit& rc : ranked)
    if (rc.id == commit_id) return rc.rank;
  throw UnknownCommit(commit_id);
}

ScoreReport score_commits(const sbfl::SuspiciousnessMap& susp,
                          const EvolveMap& ev, const CommitIdSet& cbic,
                          const VotingConfig& config, const ElementSet& ef) {
  config.validate();
  sbfl::Ranks ranks;
  if (config.mode == Mode::Vote)
    ranks = sbfl::rank_elements(susp, config.tau);

  std::map<std::string, double> scores;
  ScoreReport report;
  for (const std::string& commit : cbic) {
    scores[commit] = commit_score(commit, susp, ranks, ev, cbic, config, ef);
    for (const CodeElement& e : ef) {
      if (!ev.contains_pair(commit, e)) continue;
      VoteDetail detail;
      detail.element = e;
      detail.depth = depth(e, commit, ev, cbic);
      switch (config.mode) {
        case Mode::Vote: detail.vote = vote(e, susp, ranks, config); break;
        case Mode::Equal: detail.vote = 1.0; break;
        case Mode::ScoreOnly:
        case Mode::MaxAggr: detail.vote = susp.scores.at(e); break;
      }
      detail.contribution =
          config.mode == Mode::MaxAggr
              ? detail.vote
              : detail.vote * std::pow(1.0 - config.lambda, detail.depth);
      report.per_commit_votes[commit].push_back(detail);
    }
  }
  ScoreReport ranked = rank_commits(scores, ev, config);
  ranked.per_commit_votes = std::move(report.per_commit_votes);
  return ranked;
}

namespace {

ordered_json config_to_json(const VotingConfig& config) {
  return {{"alpha", config.alpha},
          {"tau", tie_break_name(config.tau)},
          {"lambda", config.lambda},
          {"mode", mode_name(config.mode)}};
}

VotingConfig config_from_json(const ordered_json& j, const std::string& origin) {
  VotingConfig config;
  config.alpha = j.at("alpha").get<int>();
  config.lambda = j.at("lambda").get<double>();
  std::string tau = j.at("tau").get<std::string>();
  if (tau == "max") config.tau = sbfl::TieBreak::Max;
  else if (tau == "dense") config.tau = sbfl::TieBreak::Dense;
  else throw ParseError("unknown tau '" + tau + "'", origin);
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "vote") config.mode = Mode::Vote;
  else if (mode == "equal") config.mode = Mode::Equal;
  else if (mode == "score-only") config.mode = Mode::ScoreOnly;
  else if (mode == "max-aggr") config.mode = Mode::MaxAggr;
  else throw ParseError("unknown mode '" + mode + "'", origin);
  return config;
}

}  // namespace

std::string report_to_json(const ScoreReport& report, bool explain) {
  ordered_json ranked = ordered_json::array();
  for (const RankedCommit& rc : report.ranked)
    ranked.push_back({{"commit", rc.id},
                      {"score", rc.score},
                      {"rank", rc.rank},
                      {"time", rc.key.time},
                      {"order", rc.key.order}});
  ordered_json doc = {{"config", config_to_json(report.config)},
                      {"ranked", std::move(ranked)},
                      {"zero_score_tail", report.zero_score_tail}};
  if (explain) {
    ordered_json votes = ordered_json::object();
    for (const auto& [commit, details] : report.per_commit_votes) {
      ordered_json list = ordered_json::array();
      for (const VoteDetail& d : details)
        list.push_back({{"file", d.element.file},
                        {"line", d.element.line},
                        {"vote", d.vote},
                        {"depth", d.depth},
                        {"contribution", d.contribution}});
      votes[commit] = std::move(list);
    }
    doc["votes"] = std::move(votes);
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const ScoreReport& report) {
  std::ostringstream out;
  out << "commit,score,rank\n";
  out.precision(17);
  for (const RankedCommit& rc : report.ranked)
    out << rc.id << "," << rc.score << "," << rc.rank << "\n";
  return out.str();
}

ScoreReport report_from_json(const std::string& text,
                             const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(e.what(), origin);
  }
  ScoreReport report;
  try {
    report.config = config_from_json(doc.at("config"), origin);
    for (const auto& entry : doc.at("ranked"))
      report.ranked.push_back(
          RankedCommit{entry.at("commit").get<std::string>(),
                       entry.at("score").get<double>(),
                       entry.at("rank").get<int>(),
                       CommitKey{entry.at("time").get<std::int64_t>(),
                                 entry.at("order").get<std::int64_t>()}});
    if (doc.contains("zero_score_tail"))
      report.zero_score_tail = doc["zero_score_tail"].get<bool>();
  } catch (const ordered_json::exception& e) {
    throw ParseError(e.what(), origin);
  }
  return report;
}

}  // namespace culprit::scoring
