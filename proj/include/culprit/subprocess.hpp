#pragma once

#include <string>
#include <vector>

namespace culprit {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, interleaved
};

// Single-quotes a string for /bin/sh.
std::string shell_quote(const std::string& arg);

// Builds a shell command from pre-quoted/plain argv parts, quoting each.
std::string shell_command(const std::vector<std::string>& argv);

// Runs via /bin/sh, capturing combined output. exit_code is -1 when the
// process died on a signal or could not be spawned.
CommandResult run_command(const std::string& command);

}  // namespace culprit
