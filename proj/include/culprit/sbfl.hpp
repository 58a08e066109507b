#pragma once

/*
    Statement-level suspiciousness and the ranking that feeds the voting
    model. Only Ochiai ships; other formulas can be added behind the same
    SuspiciousnessMap contract.
*/

#include <map>
#include <string>

#include "culprit/types.hpp"

namespace culprit::sbfl {

struct SuspiciousnessMap {
  std::map<CodeElement, double> scores;  // all >= 0
  std::string formula;
};

// ef / sqrt(|T_F| * (ef + ep)) per element, where ef/ep count the failing
// and passing tests covering it. Positive exactly on elements covered by
// at least one failing test. Throws NoFailingTests.
SuspiciousnessMap ochiai(const CoverageMatrix& cov);

enum class TieBreak { Max, Dense };

using Ranks = std::map<CodeElement, int>;

// Ranks the positive-score elements by descending score, starting at 1.
// Max gives every member of a tie group the worst position in the group;
// Dense numbers distinct score values consecutively. Throws EmptyDomain
// when no element has a positive score.
Ranks rank_elements(const SuspiciousnessMap& susp, TieBreak tau);

}  // namespace culprit::sbfl
