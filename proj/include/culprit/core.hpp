#pragma once

/*
    Stage 1 primitives: the failure-covered element set E_F and the commit
    candidate set C_F derived from it.
*/

#include "culprit/types.hpp"

namespace culprit {

// E_F: union of the covered sets of all failing tests.
// Throws NoFailingTests when the matrix has no FAIL outcome.
ElementSet suspicious_elements(const CoverageMatrix& cov);

// C_F: union of the histories of all elements in ef. Every element must
// have a history entry (an empty list is fine); otherwise MissingHistory.
CommitIdSet candidate_commits(const ElementSet& ef, const EvolveMap& ev);

}  // namespace culprit
