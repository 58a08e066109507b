#include "culprit/style_filter.hpp"

#include "culprit/errors.hpp"

namespace culprit::style {

ElementSet elements_touched_by(const std::string& commit, const ElementSet& ef,
                               const EvolveMap& ev) {
  ElementSet touched;
  for (const CodeElement& e : ef)
    if (ev.contains_pair(commit, e)) touched.insert(e);
  return touched;
}

bool is_style_change(const std::string& commit,
                     const std::set<std::string>& files,
                     history::VcsAdapter& adapter, const std::string& until,
                     const NormalizerRegistry& registry) {
  if (files.empty()) return false;  // nothing verifiable to compare
  for (const std::string& path : files) {
    std::optional<std::string> after = adapter.file_at(commit, path, until);
    if (!after) throw FileUnavailable(commit, path);
    std::optional<std::string> before =
        adapter.file_before(commit, path, until);
    if (!before) return false;  // created or vanished here: semantic
    SyntaxFingerprint fp_before = fingerprint_file(path, *before, registry);
    SyntaxFingerprint fp_after = fingerprint_file(path, *after, registry);
    if (!(fp_before == fp_after)) return false;
  }
  return true;
}

ReductionResult reduce_search_space(const CommitIdSet& cf, const ElementSet& ef,
                                    const EvolveMap& ev,
                                    history::VcsAdapter& adapter,
                                    const std::string& until,
                                    const NormalizerRegistry& registry) {
  ReductionResult result;
  for (const std::string& commit : cf) {
    std::set<std::string> files;
    for (const CodeElement& e : elements_touched_by(commit, ef, ev)) {
      try {
        if (adapter.modifies_path(commit, e.file, until)) files.insert(e.file);
      } catch (const Error&) {
        // Cannot confirm the commit touched this file; leave it out and
        // let the keep-decision below stand.
      }
    }
    bool style = false;
    bool verifiable = !files.empty();
    if (verifiable) {
      try {
        style = is_style_change(commit, files, adapter, until, registry);
      } catch (const Error&) {
        verifiable = false;
      }
    }
    if (style) {
      result.style_commits.insert(commit);
    } else {
      result.kept.insert(commit);
      if (!verifiable) result.unverifiable.insert(commit);
    }
  }
  return result;
}

}  // namespace culprit::style
