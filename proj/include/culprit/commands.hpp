#pragma once

/*
    Subcommand entry points, shared by the CLI binary and the tests. Each
    returns a process exit code from the stable table below so CI scripts
    can branch on the failure kind.
*/

#include <iosfwd>

#include "culprit/config.hpp"

namespace culprit::cli {

// Exit codes, stable across releases.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 10;
inline constexpr int kExitNoFailingTests = 11;
inline constexpr int kExitVcsError = 12;
inline constexpr int kExitEmptySpace = 13;
inline constexpr int kExitInconsistentOracle = 14;
inline constexpr int kExitConfigError = 15;
inline constexpr int kExitOracleAbort = 16;
inline constexpr int kExitUnknownCommit = 17;
inline constexpr int kExitOtherError = 18;

int exit_code_for(const Error& error);

// Stage 1 -> 2 -> 3; writes report.json, report.csv and run-manifest.json
// into the output directory and prints the leading commits.
int cmd_rank(const config::RunConfig& config, std::ostream& out,
             std::ostream& err);

// Weighted (or standard) bisection driven by the configured oracle; the
// probe trace goes to trace.jsonl in the output directory and, as JSON
// lines, to `out`.
int cmd_bisect(const config::RunConfig& config, std::istream& in,
               std::ostream& out, std::ostream& err);

// Benchmark over a labelled dataset; writes results.csv, results.json and
// per-subject trace/ artifacts.
int cmd_eval(const config::RunConfig& config, std::ostream& out,
             std::ostream& err);

// Mines the history of all failure-covered elements and serializes it.
int cmd_mine_history(const config::RunConfig& config, std::ostream& out,
                     std::ostream& err);

// Stage 2 only: prints the style verdict for every candidate commit.
int cmd_check_style(const config::RunConfig& config, std::ostream& out,
                    std::ostream& err);

}  // namespace culprit::cli
