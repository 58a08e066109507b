#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "culprit/commands.hpp"
#include "culprit/errors.hpp"

namespace {

using culprit::config::RunConfig;

// Config file values load first; CLI flags then overwrite whatever they
// set. The file path is picked out of argv before CLI11 runs so the flag
// bindings can point straight into the loaded struct.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

void add_common_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--config", "TOML config file (applied before flags)");
  cmd->add_option("--repo", config.repo, "git repository root");
  cmd->add_option("--until", config.until,
                  "newest commit of the search space (default HEAD)");
  cmd->add_option("--out", config.output_dir, "output directory");
  cmd->add_option("--workers", config.workers, "worker thread count");
}

void add_coverage_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--coverage", config.coverage_path,
                  "coverage input (MATRIX_JSON file or LCOV_PER_TEST dir)");
  cmd->add_option("--format",
      [&config](const std::vector<std::string>& v) {
        if (v.empty()) return false;
        if (v[0] == "matrix-json")
          config.coverage_format = culprit::coverage::Format::MatrixJson;
        else if (v[0] == "lcov-per-test")
          config.coverage_format = culprit::coverage::Format::LcovPerTest;
        else
          return false;
        return true;
      },
      "coverage format: matrix-json (default) or lcov-per-test");
}

void add_voting_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--alpha", config.voting.alpha,
                  "0: pure rank voting, 1: suspiciousness-weighted");
  cmd->add_option("--tau",
      [&config](const std::vector<std::string>& v) {
        if (v.empty()) return false;
        if (v[0] == "max") config.voting.tau = culprit::sbfl::TieBreak::Max;
        else if (v[0] == "dense")
          config.voting.tau = culprit::sbfl::TieBreak::Dense;
        else return false;
        return true;
      },
      "rank tie-breaking: max (default) or dense");
  cmd->add_option("--lambda", config.voting.lambda,
                  "depth decay factor in [0,1)");
  cmd->add_option("--mode",
      [&config](const std::vector<std::string>& v) {
        if (v.empty()) return false;
        using culprit::scoring::Mode;
        if (v[0] == "vote") config.voting.mode = Mode::Vote;
        else if (v[0] == "equal") config.voting.mode = Mode::Equal;
        else if (v[0] == "score-only") config.voting.mode = Mode::ScoreOnly;
        else if (v[0] == "max-aggr") config.voting.mode = Mode::MaxAggr;
        else return false;
        return true;
      },
      "scoring mode: vote (default), equal, score-only, max-aggr");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  const std::string config_path = find_config_arg(argc, argv);
  if (!config_path.empty()) {
    try {
      culprit::config::apply_toml(config,
                                  culprit::config::Toml::parse_file(config_path));
    } catch (const culprit::Error& e) {
      std::cerr << e.what() << "\n";
      return culprit::cli::exit_code_for(e);
    }
  }

  CLI::App app{"culprit: rank and bisect the commits likely to have caused "
               "an observed test failure"};
  app.require_subcommand(1);

  CLI::App* rank = app.add_subcommand(
      "rank", "score commits against a failure's coverage");
  add_common_options(rank, config);
  add_coverage_options(rank, config);
  add_voting_options(rank, config);
  rank->add_option("--history", config.history_path,
                   "serialized history instead of a live repo");
  rank->add_flag("--skip-stage2", config.skip_stage2,
                 "keep style-only commits in the ranking space");
  rank->add_flag("!--no-test-selection", config.relevant_test_selection,
                 "disable relevant-test selection");
  rank->add_flag("--explain", config.explain,
                 "include per-element vote provenance in report.json");

  CLI::App* bis = app.add_subcommand("bisect",
                                     "search for the culprit commit");
  add_common_options(bis, config);
  bis->add_option("--scores", config.scores_path,
                  "report.json from a rank run");
  bis->add_option("--oracle-cmd", config.oracle_cmd,
                  "probe command; {commit} is substituted, run in a scratch "
                  "worktree; exit 0 good, 1 bad");
  bis->add_option("--table", config.table_path,
                  "JSON verdict table {\"<commit>\": \"good|bad\"}");
  bis->add_flag("--interactive", config.interactive,
                "ask good/bad per probe");
  bis->add_flag("--uniform", config.uniform,
                "ignore scores (standard bisection behaviour)");
  bis->add_flag("--standard", config.standard,
                "midpoint pivots instead of score-halving pivots");
  bis->add_flag("!--no-confirm-single", config.confirm_single,
                "skip the confirming probe when one candidate remains");

  CLI::App* evalc = app.add_subcommand(
      "eval", "run the benchmark harness over a labelled dataset");
  add_common_options(evalc, config);
  add_voting_options(evalc, config);
  evalc->add_option("--dataset", config.dataset_dir,
                    "dataset directory of subject subdirectories");
  evalc->add_flag("--skip-stage2", config.skip_stage2,
                  "ignore precomputed style commits");

  CLI::App* mine = app.add_subcommand(
      "mine-history", "trace and serialize the history of covered elements");
  add_common_options(mine, config);
  add_coverage_options(mine, config);

  CLI::App* style = app.add_subcommand(
      "check-style", "report which candidate commits are style-only");
  add_common_options(style, config);
  add_coverage_options(style, config);
  style->add_option("--history", config.history_path,
                    "serialized history instead of a live repo");

  CLI11_PARSE(app, argc, argv);

  try {
    config.validate_voting();
    if (*rank) return culprit::cli::cmd_rank(config, std::cout, std::cerr);
    if (*bis)
      return culprit::cli::cmd_bisect(config, std::cin, std::cout, std::cerr);
    if (*evalc) return culprit::cli::cmd_eval(config, std::cout, std::cerr);
    if (*mine)
      return culprit::cli::cmd_mine_history(config, std::cout, std::cerr);
    if (*style)
      return culprit::cli::cmd_check_style(config, std::cout, std::cerr);
  } catch (const culprit::Error& e) {
    std::cerr << e.what() << "\n";
    return culprit::cli::exit_code_for(e);
  }
  return culprit::cli::kExitConfigError;
}
