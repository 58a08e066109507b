#include "culprit/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "culprit/bisect.hpp"
#include "culprit/core.hpp"
#include "culprit/coverage.hpp"
#include "culprit/errors.hpp"
#include "culprit/eval.hpp"
#include "culprit/history.hpp"
#include "culprit/sbfl.hpp"
#include "culprit/scorer.hpp"
#include "culprit/style_filter.hpp"
#include "culprit/vcs.hpp"

namespace culprit::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::DuplicateTestName: return kExitParseError;
    case ErrorCode::NoFailingTests: return kExitNoFailingTests;
    case ErrorCode::VcsError:
    case ErrorCode::FileUnavailable: return kExitVcsError;
    case ErrorCode::EmptySpace:
    case ErrorCode::EmptyDomain:
    case ErrorCode::EmptyInput: return kExitEmptySpace;
    case ErrorCode::InconsistentOracle: return kExitInconsistentOracle;
    case ErrorCode::ConfigError: return kExitConfigError;
    case ErrorCode::OracleAbort: return kExitOracleAbort;
    case ErrorCode::UnknownCommit:
    case ErrorCode::MissingHistory: return kExitUnknownCommit;
    case ErrorCode::InvalidModel: return kExitOtherError;
  }
  return kExitOtherError;
}

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string digest_of_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unavailable";
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof hex, "fnv64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::ConfigError,
                "cannot write output file " + path.string());
  out << text;
}

void write_manifest(const config::RunConfig& config, const std::string& command,
                    const std::vector<fs::path>& inputs) {
  fs::create_directories(config.output_dir);
  ordered_json digests = ordered_json::object();
  for (const fs::path& input : inputs)
    if (!input.empty()) digests[input.string()] = digest_of_file(input);
  ordered_json manifest = {
      {"tool", "culprit"},
      {"version", kToolVersion},
      {"command", command},
      {"config", ordered_json::parse(config::run_config_to_json(config))},
      {"inputs", std::move(digests)},
  };
  write_text(fs::path(config.output_dir) / "run-manifest.json",
             manifest.dump(2) + "\n");
}

style::NormalizerRegistry make_registry(const config::RunConfig& config) {
  style::NormalizerRegistry registry;
  std::istringstream in(config.c_family_extensions);
  std::string ext;
  while (std::getline(in, ext, ',')) {
    if (ext.empty()) continue;
    if (ext[0] != '.') ext = "." + ext;
    registry.set(ext, style::Normalizer::CFamily);
  }
  return registry;
}

std::unique_ptr<history::VcsAdapter> open_adapter(
    const config::RunConfig& config) {
  if (!config.history_path.empty())
    return history::open_serialized(config.history_path);
  if (config.repo.empty())
    throw ConfigError("either a repository or a serialized history is needed");
  return std::make_unique<history::GitCliAdapter>(config.repo);
}

struct PipelineRun {
  CoverageMatrix matrix;
  ElementSet ef;
  CommitIdSet cf;
  style::ReductionResult reduction;  // kept == C_BIC
  sbfl::SuspiciousnessMap susp;
  scoring::ScoreReport report;
  std::string until_id;
};

PipelineRun run_pipeline(const config::RunConfig& config,
                         history::VcsAdapter& adapter, std::ostream& err) {
  config.validate_voting();
  PipelineRun run;

  CoverageMatrix loaded = coverage::load_coverage(
      {config.coverage_path, config.coverage_format});
  run.matrix = config.relevant_test_selection
                   ? coverage::select_relevant_tests(loaded)
                   : std::move(loaded);

  run.until_id = adapter.resolve_commit(config.until);
  run.ef = suspicious_elements(run.matrix);
  EvolveMap ev = history::build_evolve_map(adapter, run.ef, run.until_id,
                                           config.workers);
  run.cf = candidate_commits(run.ef, ev);

  if (config.skip_stage2) {
    run.reduction.kept = run.cf;
  } else if (adapter.kind() == history::AdapterKind::Serialized) {
    // A serialized replay has no file contents; every commit stays.
    run.reduction.kept = run.cf;
    run.reduction.unverifiable = run.cf;
    if (!run.cf.empty())
      err << "note: style filtering skipped (serialized history has no file "
             "contents)\n";
  } else {
    run.reduction = style::reduce_search_space(
        run.cf, run.ef, ev, adapter, run.until_id, make_registry(config));
  }

  run.susp = sbfl::ochiai(run.matrix);
  run.report = scoring::score_commits(run.susp, ev, run.reduction.kept,
                                      config.voting, run.ef);
  return run;
}

}  // namespace

int cmd_rank(const config::RunConfig& config, std::ostream& out,
             std::ostream& err) {
  try {
    auto adapter = open_adapter(config);
    PipelineRun run = run_pipeline(config, *adapter, err);

    fs::create_directories(config.output_dir);
    write_text(fs::path(config.output_dir) / "report.json",
               scoring::report_to_json(run.report, config.explain));
    write_text(fs::path(config.output_dir) / "report.csv",
               scoring::report_to_csv(run.report));
    write_manifest(config, "rank",
                   {config.coverage_path, config.history_path});

    out << "tests: " << run.matrix.tests().size() << " ("
        << run.matrix.failing_count() << " failing), covered elements: "
        << run.ef.size() << "\n";
    out << "commits: " << run.cf.size() << " candidates, "
        << run.reduction.style_commits.size() << " style-only removed, "
        << run.reduction.kept.size() << " ranked\n";
    const size_t show = std::min<size_t>(run.report.ranked.size(), 10);
    for (size_t i = 0; i < show; ++i) {
      const auto& rc = run.report.ranked[i];
      char line[160];
      std::snprintf(line, sizeof line, "%4d  %-42s  %.6f\n", rc.rank,
                    rc.id.c_str(), rc.score);
      out << line;
    }
    out << "report written to "
        << (fs::path(config.output_dir) / "report.json").string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitOtherError;
  }
}

namespace {

std::map<std::string, bisect::Verdict> load_verdict_table(
    const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open verdict table", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ordered_json doc;
  try {
    doc = ordered_json::parse(buf.str());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(e.what(), path.string());
  }
  std::map<std::string, bisect::Verdict> table;
  for (const auto& [commit, verdict] : doc.items()) {
    const std::string v = verdict.get<std::string>();
    if (v == "good") table[commit] = bisect::Verdict::Good;
    else if (v == "bad") table[commit] = bisect::Verdict::Bad;
    else throw ParseError("verdict must be good or bad", path.string());
  }
  return table;
}

}  // namespace

int cmd_bisect(const config::RunConfig& config, std::istream& in,
               std::ostream& out, std::ostream& err) {
  try {
    std::vector<CommitRef> commits;
    std::map<std::string, double> scores;
    if (!config.scores_path.empty()) {
      std::ifstream f(config.scores_path, std::ios::binary);
      if (!f) throw ParseError("cannot open score report", config.scores_path);
      std::ostringstream buf;
      buf << f.rdbuf();
      scoring::ScoreReport report =
          scoring::report_from_json(buf.str(), config.scores_path);
      for (const scoring::RankedCommit& rc : report.ranked) {
        commits.push_back(CommitRef{rc.id, rc.key});
        scores[rc.id] = rc.score;
      }
    } else if (config.uniform && !config.repo.empty()) {
      history::GitCliAdapter adapter(config.repo);
      commits = adapter.all_commits(config.until);
    } else {
      throw ConfigError("bisect needs --scores, or --uniform with a repo");
    }

    bisect::ScoreFn score_fn;
    if (config.uniform) {
      score_fn = [](const std::string&) { return 1.0; };
    } else {
      score_fn = [&scores](const std::string& id) {
        auto it = scores.find(id);
        return it == scores.end() ? 0.0 : it->second;
      };
    }

    std::unique_ptr<bisect::Oracle> oracle;
    if (!config.table_path.empty())
      oracle = std::make_unique<bisect::TableOracle>(
          load_verdict_table(config.table_path));
    else if (!config.oracle_cmd.empty()) {
      if (config.repo.empty())
        throw ConfigError("--oracle-cmd needs a repository to check out");
      oracle = std::make_unique<bisect::CommandOracle>(config.repo,
                                                       config.oracle_cmd);
    } else if (config.interactive) {
      oracle = std::make_unique<bisect::InteractiveOracle>(in, err);
    } else {
      throw ConfigError("bisect needs an oracle: --oracle-cmd, --table, or "
                        "--interactive");
    }

    bisect::BisectOptions options;
    options.confirm_single_candidate = config.confirm_single;
    bisect::BisectResult result =
        config.standard
            ? bisect::standard_bisect(commits, *oracle, options)
            : bisect::weighted_bisect(commits, score_fn, *oracle, options);

    std::ostringstream trace;
    for (const bisect::ProbeRecord& probe : result.trace) {
      ordered_json line = {
          {"pivot", probe.commit},
          {"verdict", probe.verdict == bisect::Verdict::Bad ? "bad" : "good"}};
      trace << line.dump() << "\n";
      out << line.dump() << "\n";
    }
    ordered_json final_line = {{"culprit", result.culprit},
                               {"iterations", result.iterations}};
    trace << final_line.dump() << "\n";
    out << final_line.dump() << "\n";

    fs::create_directories(config.output_dir);
    write_text(fs::path(config.output_dir) / "trace.jsonl", trace.str());
    write_manifest(config, "bisect",
                   {config.scores_path, config.table_path});
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitOtherError;
  }
}

int cmd_eval(const config::RunConfig& config, std::ostream& out,
             std::ostream& err) {
  try {
    if (config.dataset_dir.empty())
      throw ConfigError("eval needs a dataset directory");
    std::vector<eval::LabelledSubject> subjects =
        eval::load_dataset(config.dataset_dir);
    if (subjects.empty())
      throw EmptyInput("dataset has no subject directories");

    eval::BenchmarkConfig bench;
    bench.voting = config.voting;
    bench.relevant_test_selection = config.relevant_test_selection;
    bench.skip_stage2 = config.skip_stage2;
    bench.workers = config.workers;
    eval::BenchmarkReport report = eval::run_benchmark(subjects, bench);

    fs::create_directories(fs::path(config.output_dir) / "trace");
    write_text(fs::path(config.output_dir) / "results.csv", report.to_csv());
    write_text(fs::path(config.output_dir) / "results.json", report.to_json());
    for (const eval::SubjectOutcome& outcome : report.subjects) {
      if (!outcome.ok) continue;
      write_text(fs::path(config.output_dir) / "trace" /
                     (outcome.subject + ".json"),
                 scoring::report_to_json(outcome.primary_report, true));
    }
    write_manifest(config, "eval", {});

    for (const eval::AggregateRow& row : report.rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%-16s MRR %.4f", row.variant.c_str(),
                    row.mrr);
      out << line;
      for (const auto& [n, count] : row.accuracy) {
        std::snprintf(line, sizeof line, "  @%d %.1f", n, count);
        out << line;
      }
      out << "\n";
    }
    int failed = 0;
    for (const eval::SubjectOutcome& s : report.subjects)
      if (!s.ok) {
        ++failed;
        err << "subject " << s.subject << " failed: " << s.error << "\n";
      }
    out << report.subjects.size() - failed << "/" << report.subjects.size()
        << " subjects evaluated\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitOtherError;
  }
}

int cmd_mine_history(const config::RunConfig& config, std::ostream& out,
                     std::ostream& err) {
  try {
    if (config.repo.empty()) throw ConfigError("mine-history needs a repo");
    history::GitCliAdapter adapter(config.repo);
    CoverageMatrix matrix = coverage::load_coverage(
        {config.coverage_path, config.coverage_format});
    const ElementSet ef = suspicious_elements(matrix);
    const std::string until = adapter.resolve_commit(config.until);
    EvolveMap map = history::build_evolve_map(adapter, ef, until,
                                              config.workers);
    fs::create_directories(config.output_dir);
    const fs::path out_path = fs::path(config.output_dir) / "history.json";
    history::write_evolve_map(out_path, map);
    write_manifest(config, "mine-history", {config.coverage_path});
    out << "traced " << map.histories().size() << " elements, "
        << map.all_commits().size() << " distinct commits -> "
        << out_path.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitOtherError;
  }
}

int cmd_check_style(const config::RunConfig& config, std::ostream& out,
                    std::ostream& err) {
  try {
    auto adapter = open_adapter(config);
    CoverageMatrix matrix = coverage::load_coverage(
        {config.coverage_path, config.coverage_format});
    const ElementSet ef = suspicious_elements(matrix);
    const std::string until = adapter->resolve_commit(config.until);
    EvolveMap ev = history::build_evolve_map(*adapter, ef, until,
                                             config.workers);
    const CommitIdSet cf = candidate_commits(ef, ev);
    style::ReductionResult reduction = style::reduce_search_space(
        cf, ef, ev, *adapter, until, make_registry(config));
    for (const std::string& commit : cf) {
      const char* verdict = reduction.style_commits.count(commit) ? "style"
                            : reduction.unverifiable.count(commit)
                                ? "unverified"
                                : "semantic";
      out << commit << "\t" << verdict << "\n";
    }
    out << reduction.style_commits.size() << " style-only of " << cf.size()
        << " candidates\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitOtherError;
  }
}

}  // namespace culprit::cli
