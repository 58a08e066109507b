#pragma once

/*
    Builds the Evolve relation: for each failure-covered statement, the
    change history of its enclosing method. Statements sharing a span share
    one trace, which also lets omission bugs inherit the history of their
    neighbours.
*/

#include <optional>

#include "culprit/types.hpp"
#include "culprit/vcs.hpp"

namespace culprit::history {

// Innermost brace block around `line` whose header reads like a function
// signature (has a parameter list, no leading control keyword). nullopt
// when brace matching finds nothing usable.
std::optional<LineSpan> resolve_method_span(std::string_view content,
                                            int line);

// The span used for tracing: the element's own span when present, else a
// resolved one, else the single statement line.
LineSpan effective_span(VcsAdapter& adapter, const CodeElement& element,
                        const std::string& until);

// History of the element's enclosing span up to `until`, newest first.
std::vector<CommitRef> trace_history(VcsAdapter& adapter,
                                     const CodeElement& element,
                                     const std::string& until);

// Traces every element of ef, memoizing per (file, span); traces run on up
// to `workers` threads. Per-element failures are aggregated into one
// VcsError naming the elements.
EvolveMap build_evolve_map(VcsAdapter& adapter, const ElementSet& ef,
                           const std::string& until, unsigned workers = 0);

}  // namespace culprit::history
