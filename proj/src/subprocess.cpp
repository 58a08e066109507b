#include "culprit/subprocess.hpp"

#include <array>
#include <cstdio>

#include <sys/wait.h>

namespace culprit {

std::string shell_quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

std::string shell_command(const std::vector<std::string>& argv) {
  std::string cmd;
  for (const std::string& arg : argv) {
    if (!cmd.empty()) cmd += ' ';
    cmd += shell_quote(arg);
  }
  return cmd;
}

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return result;

  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), n);

  int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

}  // namespace culprit
