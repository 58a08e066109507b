#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "culprit/subprocess.hpp"
#include "culprit/types.hpp"

namespace testutil {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    for (int attempt = 0; attempt < 32; ++attempt) {
      fs::path candidate = fs::temp_directory_path() /
                           ("culprit-test-" + std::to_string(rd()));
      std::error_code ec;
      if (fs::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// A scratch git repository with commit timestamps under test control.
class GitRepo {
 public:
  explicit GitRepo(fs::path dir) : dir_(std::move(dir)) {
    run({"git", "init", "-q", "-b", "main", dir_.string()});
    run({"git", "-C", dir_.string(), "config", "user.name", "fixture"});
    run({"git", "-C", dir_.string(), "config", "user.email",
         "fixture@example.invalid"});
  }

  void write(const std::string& rel, const std::string& content) {
    write_file(dir_ / rel, content);
  }

  void move(const std::string& from, const std::string& to) {
    run({"git", "-C", dir_.string(), "mv", from, to});
  }

  // Stages everything and commits with the given epoch timestamp.
  // Returns the commit id.
  std::string commit(const std::string& message, std::int64_t time) {
    run({"git", "-C", dir_.string(), "add", "-A"});
    const std::string stamp = "@" + std::to_string(time) + " +0000";
    const std::string cmd =
        "GIT_COMMITTER_DATE=" + culprit::shell_quote(stamp) +
        " GIT_AUTHOR_DATE=" + culprit::shell_quote(stamp) + " " +
        culprit::shell_command({"git", "-C", dir_.string(), "commit", "-q",
                                "--allow-empty", "-m", message});
    auto result = culprit::run_command(cmd);
    if (result.exit_code != 0)
      throw std::runtime_error("git commit failed: " + result.output);
    return head();
  }

  std::string head() const {
    auto result = culprit::run_command(
        culprit::shell_command({"git", "-C", dir_.string(), "rev-parse", "HEAD"}));
    std::string id = result.output;
    while (!id.empty() && (id.back() == '\n' || id.back() == '\r'))
      id.pop_back();
    return id;
  }

  const fs::path& dir() const { return dir_; }

 private:
  void run(const std::vector<std::string>& argv) const {
    auto result = culprit::run_command(culprit::shell_command(argv));
    if (result.exit_code != 0)
      throw std::runtime_error("fixture command failed: " + result.output);
  }

  fs::path dir_;
};

inline culprit::CodeElement elem(std::string file, int line) {
  return culprit::CodeElement{std::move(file), line, std::nullopt};
}

inline culprit::CodeElement elem(std::string file, int line, int begin,
                                 int end) {
  return culprit::CodeElement{std::move(file), line,
                              culprit::LineSpan{begin, end}};
}

inline culprit::CommitRef ref(std::string id, std::int64_t time,
                              std::int64_t order) {
  return culprit::CommitRef{std::move(id), culprit::CommitKey{time, order}};
}

}  // namespace testutil
