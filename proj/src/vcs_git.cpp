#include <cctype>
#include <cstdlib>
#include <sstream>

#include "culprit/errors.hpp"
#include "culprit/subprocess.hpp"
#include "culprit/vcs.hpp"

namespace culprit::history {

namespace {

bool is_hex40(std::string_view s) {
  if (s.size() != 40) return false;
  for (char c : s)
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Splits "<40-hex>\t<int>" lines; anything else (warnings, blanks) is
// skipped.
std::vector<std::pair<std::string, std::int64_t>> parse_hash_time_lines(
    const std::string& output) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    size_t tab = line.find('\t');
    if (tab != 40 || !is_hex40(std::string_view(line).substr(0, 40))) continue;
    try {
      out.emplace_back(line.substr(0, 40), std::stoll(line.substr(tab + 1)));
    } catch (const std::exception&) {
      // not a header line
    }
  }
  return out;
}

}  // namespace

GitCliAdapter::GitCliAdapter(std::filesystem::path repo_root,
                             std::string git_binary)
    : root_(std::move(repo_root)), git_(std::move(git_binary)) {
  if (git_.empty()) {
    const char* env = std::getenv("CULPRIT_VCS");
    git_ = env && *env ? env : "git";
  }
}

std::string GitCliAdapter::run_or_throw(
    const std::vector<std::string>& args) const {
  std::vector<std::string> argv{git_, "-C", root_.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  const std::string cmd = shell_command(argv);
  CommandResult result = run_command(cmd);
  if (result.exit_code != 0)
    throw VcsError("command failed (" + std::to_string(result.exit_code) +
                   "): " + cmd + "\n" + result.output);
  return result.output;
}

std::string GitCliAdapter::resolve_commit(const std::string& rev) {
  std::vector<std::string> argv{git_,       "-C",       root_.string(),
                                "rev-parse", "--verify", rev + "^{commit}"};
  CommandResult result = run_command(shell_command(argv));
  if (result.exit_code != 0) throw UnknownCommit(rev);
  std::string id = result.output;
  while (!id.empty() && (id.back() == '\n' || id.back() == '\r')) id.pop_back();
  if (!is_hex40(id)) throw UnknownCommit(rev);
  return id;
}

const std::map<std::string, std::int64_t>& GitCliAdapter::topo_order(
    const std::string& until) {
  auto it = topo_cache_.find(until);
  if (it != topo_cache_.end()) return it->second;

  std::string output =
      run_or_throw({"log", "--topo-order", "--format=%H%x09%ct", until});
  auto lines = parse_hash_time_lines(output);  // newest first
  std::map<std::string, std::int64_t> order;
  std::int64_t pos = 0;
  for (auto rit = lines.rbegin(); rit != lines.rend(); ++rit)
    order[rit->first] = pos++;  // oldest = 0
  return topo_cache_.emplace(until, std::move(order)).first->second;
}

std::vector<CommitRef> GitCliAdapter::all_commits(const std::string& until) {
  const std::string id = resolve_commit(until);
  std::string output =
      run_or_throw({"log", "--topo-order", "--format=%H%x09%ct", id});
  const auto& order = topo_order(id);
  std::vector<CommitRef> out;
  for (auto& [hash, time] : parse_hash_time_lines(output))
    out.push_back(CommitRef{hash, CommitKey{time, order.at(hash)}});
  return out;
}

std::vector<CommitRef> GitCliAdapter::trace_span(const std::string& file,
                                                 const LineSpan& span,
                                                 const std::string& until) {
  const std::string id = resolve_commit(until);
  std::string range = "-L" + std::to_string(span.begin_line) + "," +
                      std::to_string(span.end_line) + ":" + file;
  std::string output = run_or_throw(
      {"log", "-C", "-M", range, "--format=%H%x09%ct", "-s", id});
  const auto& order = topo_order(id);
  std::vector<CommitRef> out;
  for (auto& [hash, time] : parse_hash_time_lines(output)) {
    auto it = order.find(hash);
    if (it == order.end())
      throw VcsError("line-log commit " + hash + " not reachable from " + id);
    out.push_back(CommitRef{hash, CommitKey{time, it->second}});
  }
  return out;
}

std::optional<std::string> GitCliAdapter::show_blob(const std::string& spec) {
  std::vector<std::string> argv{git_, "-C", root_.string(), "show", spec};
  CommandResult result = run_command(shell_command(argv));
  if (result.exit_code != 0) return std::nullopt;
  return result.output;
}

const std::vector<GitCliAdapter::ChainEntry>& GitCliAdapter::rename_chain(
    const std::string& path, const std::string& until) {
  const std::string id = resolve_commit(until);
  auto key = std::make_pair(id, path);
  auto it = chain_cache_.find(key);
  if (it != chain_cache_.end()) return it->second;

  std::string output = run_or_throw({"log", "--follow", "--name-status", "-M",
                                     "-C", "--format=%H%x09%ct", id, "--",
                                     path});
  // Entries come newest first. Each header line is followed by the
  // name-status rows of that commit; the row for our file tells us the
  // name the file had at (and before) the commit.
  std::vector<ChainEntry> chain;
  std::string current_name = path;
  std::istringstream in(output);
  std::string line;
  ChainEntry* open_entry = nullptr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.size() > 41 && line[40] == '\t' &&
        is_hex40(std::string_view(line).substr(0, 40))) {
      chain.push_back(ChainEntry{line.substr(0, 40), current_name, {}, false});
      open_entry = &chain.back();
      continue;
    }
    if (!open_entry) continue;
    // Status rows: "M\tpath", "A\tpath", "R<score>\told\tnew", ...
    size_t tab1 = line.find('\t');
    if (tab1 == std::string::npos) continue;
    const char status = line[0];
    if (status == 'R' || status == 'C') {
      size_t tab2 = line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos) continue;
      std::string old_name = line.substr(tab1 + 1, tab2 - tab1 - 1);
      std::string new_name = line.substr(tab2 + 1);
      if (new_name == open_entry->name_at) {
        open_entry->name_before = old_name;
        current_name = old_name;  // older commits know the old name
      }
    } else if (tab1 + 1 < line.size()) {
      std::string name = line.substr(tab1 + 1);
      if (name == open_entry->name_at) {
        if (status == 'A') {
          open_entry->created = true;
          open_entry->name_before.clear();
        } else {
          open_entry->name_before = name;
        }
      }
    }
  }
  return chain_cache_.emplace(std::move(key), std::move(chain)).first->second;
}

const GitCliAdapter::ChainEntry* GitCliAdapter::chain_entry(
    const std::string& commit, const std::string& path,
    const std::string& until) {
  for (const ChainEntry& entry : rename_chain(path, until))
    if (entry.commit == commit) return &entry;
  return nullptr;
}

bool GitCliAdapter::modifies_path(const std::string& commit,
                                  const std::string& snapshot_path,
                                  const std::string& until) {
  return chain_entry(resolve_commit(commit), snapshot_path, until) != nullptr;
}

std::optional<std::string> GitCliAdapter::file_at(
    const std::string& commit, const std::string& snapshot_path,
    const std::string& until) {
  const std::string id = resolve_commit(commit);
  const ChainEntry* entry = chain_entry(id, snapshot_path, until);
  const std::string name = entry ? entry->name_at : snapshot_path;
  return show_blob(id + ":" + name);
}

std::optional<std::string> GitCliAdapter::file_before(
    const std::string& commit, const std::string& snapshot_path,
    const std::string& until) {
  const std::string id = resolve_commit(commit);
  const ChainEntry* entry = chain_entry(id, snapshot_path, until);
  if (!entry || entry->created) return std::nullopt;
  std::string name =
      entry->name_before.empty() ? entry->name_at : entry->name_before;
  return show_blob(id + "^:" + name);
}

CommitRecord GitCliAdapter::commit_record(const std::string& id) {
  const std::string full = resolve_commit(id);
  std::string meta = run_or_throw({"show", "-s", "--format=%ct%x01%s", full});
  CommitRecord record;
  record.id = full;
  size_t sep = meta.find('\x01');
  if (sep == std::string::npos)
    throw VcsError("unexpected metadata for " + full + ": " + meta);
  record.key.time = std::stoll(meta.substr(0, sep));
  record.message = meta.substr(sep + 1);
  while (!record.message.empty() &&
         (record.message.back() == '\n' || record.message.back() == '\r'))
    record.message.pop_back();
  for (const auto& [until, order] : topo_cache_) {
    auto it = order.find(full);
    if (it != order.end()) {
      record.key.order = it->second;
      break;
    }
  }

  // Unified-0 diff gives the changed files and their line-range hunks.
  std::string diff =
      run_or_throw({"show", "--format=", "--unified=0", "-M", "-C", full});
  std::istringstream in(diff);
  std::string line;
  FileChange* current = nullptr;
  while (std::getline(in, line)) {
    if (line.rfind("--- ", 0) == 0) {
      record.changed_files.push_back(FileChange{});
      current = &record.changed_files.back();
      std::string p = line.substr(4);
      if (p != "/dev/null") current->old_path = p.substr(p.find('/') + 1);
    } else if (line.rfind("+++ ", 0) == 0 && current) {
      std::string p = line.substr(4);
      if (p != "/dev/null") current->new_path = p.substr(p.find('/') + 1);
    } else if (line.rfind("@@ ", 0) == 0 && current) {
      // @@ -old_start[,old_count] +new_start[,new_count] @@
      Hunk hunk;
      int consumed = std::sscanf(line.c_str(), "@@ -%d,%d +%d,%d @@",
                                 &hunk.old_start, &hunk.old_count,
                                 &hunk.new_start, &hunk.new_count);
      if (consumed < 4) {
        hunk = Hunk{};
        hunk.old_count = hunk.new_count = 1;
        consumed = std::sscanf(line.c_str(), "@@ -%d,%d +%d @@",
                               &hunk.old_start, &hunk.old_count,
                               &hunk.new_start);
        if (consumed < 3) {
          hunk.old_count = 1;
          consumed = std::sscanf(line.c_str(), "@@ -%d +%d,%d @@",
                                 &hunk.old_start, &hunk.new_start,
                                 &hunk.new_count);
          if (consumed < 3) {
            hunk.new_count = 1;
            consumed = std::sscanf(line.c_str(), "@@ -%d +%d @@",
                                   &hunk.old_start, &hunk.new_start);
            if (consumed < 2) continue;
          }
        }
      }
      current->hunks.push_back(hunk);
    }
  }
  return record;
}

}  // namespace culprit::history
