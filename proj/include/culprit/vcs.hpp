#pragma once

/*
    Version-control adapters behind one interface. GitCliAdapter shells out
    to git with line-range history, rename and copy detection enabled.
    SerializedAdapter replays a previously mined history file and cannot
    materialize file contents (style checks then keep every commit).

    Serialized history format:
      {"elements":[{"file":str,"line":int,
                    "history":[{"id":str,"time":int,"order":int},...]},...]}
*/

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "culprit/types.hpp"

namespace culprit::history {

enum class AdapterKind { GitCli, Serialized };

class VcsAdapter {
 public:
  virtual ~VcsAdapter() = default;
  virtual AdapterKind kind() const = 0;

  // Full commit id for a revision spec. Throws UnknownCommit.
  virtual std::string resolve_commit(const std::string& rev) = 0;

  // Newest-first history of the span in `file`, up to and including
  // `until`, following renames/copies/moves. Throws VcsError.
  virtual std::vector<CommitRef> trace_span(const std::string& file,
                                            const LineSpan& span,
                                            const std::string& until) = 0;

  // All commits reachable from `until`, newest first.
  virtual std::vector<CommitRef> all_commits(const std::string& until) = 0;

  // Content of the file (named by its snapshot path) at a commit.
  virtual std::optional<std::string> file_at(const std::string& commit,
                                             const std::string& snapshot_path,
                                             const std::string& until) = 0;

  // Content of the same file just before the commit, following its rename
  // chain. nullopt when the file did not exist (creation commit).
  virtual std::optional<std::string> file_before(
      const std::string& commit, const std::string& snapshot_path,
      const std::string& until) = 0;

  // Whether the commit modified the lineage of the snapshot path.
  virtual bool modifies_path(const std::string& commit,
                             const std::string& snapshot_path,
                             const std::string& until) = 0;

  // Metadata + changed files of one commit; hunk detail where available.
  virtual CommitRecord commit_record(const std::string& id) = 0;
};

class GitCliAdapter : public VcsAdapter {
 public:
  // Binary resolution order: explicit argument, $CULPRIT_VCS, "git".
  explicit GitCliAdapter(std::filesystem::path repo_root,
                         std::string git_binary = {});

  AdapterKind kind() const override { return AdapterKind::GitCli; }
  std::string resolve_commit(const std::string& rev) override;
  std::vector<CommitRef> trace_span(const std::string& file,
                                    const LineSpan& span,
                                    const std::string& until) override;
  std::vector<CommitRef> all_commits(const std::string& until) override;
  std::optional<std::string> file_at(const std::string& commit,
                                     const std::string& snapshot_path,
                                     const std::string& until) override;
  std::optional<std::string> file_before(const std::string& commit,
                                         const std::string& snapshot_path,
                                         const std::string& until) override;
  bool modifies_path(const std::string& commit,
                     const std::string& snapshot_path,
                     const std::string& until) override;
  CommitRecord commit_record(const std::string& id) override;

  const std::filesystem::path& root() const { return root_; }
  const std::string& binary() const { return git_; }

  // Raw content of a blob, by any <rev>:<path> spec git show accepts.
  std::optional<std::string> show_blob(const std::string& spec);

 private:
  struct ChainEntry {
    std::string commit;
    std::string name_at;      // path of the file at this commit
    std::string name_before;  // path just before it; empty when created here
    bool created = false;
  };

  std::string run_or_throw(const std::vector<std::string>& args) const;
  const std::map<std::string, std::int64_t>& topo_order(
      const std::string& until);
  const std::vector<ChainEntry>& rename_chain(const std::string& path,
                                              const std::string& until);
  const ChainEntry* chain_entry(const std::string& commit,
                                const std::string& path,
                                const std::string& until);

  std::filesystem::path root_;
  std::string git_;
  // until-id -> commit-id -> position from the oldest (oldest = 0)
  std::map<std::string, std::map<std::string, std::int64_t>> topo_cache_;
  // (until-id, snapshot path) -> newest-first chain
  std::map<std::pair<std::string, std::string>, std::vector<ChainEntry>>
      chain_cache_;
};

class SerializedAdapter : public VcsAdapter {
 public:
  explicit SerializedAdapter(EvolveMap map) : map_(std::move(map)) {}

  AdapterKind kind() const override { return AdapterKind::Serialized; }
  std::string resolve_commit(const std::string& rev) override { return rev; }
  std::vector<CommitRef> trace_span(const std::string& file,
                                    const LineSpan& span,
                                    const std::string& until) override;
  std::vector<CommitRef> all_commits(const std::string& until) override;
  std::optional<std::string> file_at(const std::string&, const std::string&,
                                     const std::string&) override {
    return std::nullopt;
  }
  std::optional<std::string> file_before(const std::string&,
                                         const std::string&,
                                         const std::string&) override {
    return std::nullopt;
  }
  bool modifies_path(const std::string& commit,
                     const std::string& snapshot_path,
                     const std::string& until) override;

  CommitRecord commit_record(const std::string& id) override;

  const EvolveMap& map() const { return map_; }

 private:
  EvolveMap map_;
};

EvolveMap load_evolve_map(const std::filesystem::path& path);
EvolveMap parse_evolve_map(const std::string& text, const std::string& origin);
std::string serialize_evolve_map(const EvolveMap& map);
void write_evolve_map(const std::filesystem::path& path, const EvolveMap& map);

std::unique_ptr<SerializedAdapter> open_serialized(
    const std::filesystem::path& path);

}  // namespace culprit::history
