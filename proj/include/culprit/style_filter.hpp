#pragma once

/*
    Stage 2: drops commits whose changes to failure-covered files are
    style-only. A commit is removed only when every covered file it touched
    has identical syntactic fingerprints before and after it, so the
    reduction never discards a commit that made a semantic change to the
    covered code.
*/

#include "culprit/normalize.hpp"
#include "culprit/types.hpp"
#include "culprit/vcs.hpp"

namespace culprit::style {

// E_F^c: the covered elements whose history contains the commit.
ElementSet elements_touched_by(const std::string& commit, const ElementSet& ef,
                               const EvolveMap& ev);

// True iff every file in `files` has equal fingerprints before and after
// the commit. Throws FileUnavailable when either version of some file
// cannot be materialized; callers treat that as "not a style change".
bool is_style_change(const std::string& commit,
                     const std::set<std::string>& files,
                     history::VcsAdapter& adapter, const std::string& until,
                     const NormalizerRegistry& registry);

struct ReductionResult {
  CommitIdSet kept;            // C_BIC
  CommitIdSet style_commits;   // C_SC, removed
  CommitIdSet unverifiable;    // kept because contents were unavailable
};

// C_BIC = C_F minus detected style-change commits. Adapter failures keep
// the commit.
ReductionResult reduce_search_space(const CommitIdSet& cf, const ElementSet& ef,
                                    const EvolveMap& ev,
                                    history::VcsAdapter& adapter,
                                    const std::string& until,
                                    const NormalizerRegistry& registry);

}  // namespace culprit::style
