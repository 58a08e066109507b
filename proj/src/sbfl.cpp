#include "culprit/sbfl.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "culprit/errors.hpp"

namespace culprit::sbfl {

SuspiciousnessMap ochiai(const CoverageMatrix& cov) {
  const double total_failing = static_cast<double>(cov.failing_count());
  if (total_failing == 0) throw NoFailingTests("fault-localisation");

  std::map<CodeElement, int> ef;
  std::map<CodeElement, int> ep;
  std::map<CodeElement, double> scores;
  for (const TestCase& t : cov.tests()) {
    for (const CodeElement& e : cov.covered(t.full_name)) {
      (t.outcome == Outcome::Fail ? ef[e] : ep[e]) += 1;
      scores[e] = 0.0;
    }
  }

  for (auto& [element, score] : scores) {
    const int covered_failing = ef.count(element) ? ef.at(element) : 0;
    if (covered_failing == 0) continue;  // score stays 0
    const int covered_passing = ep.count(element) ? ep.at(element) : 0;
    score = covered_failing /
            std::sqrt(total_failing * (covered_failing + covered_passing));
  }
  return {std::move(scores), "ochiai"};
}

Ranks rank_elements(const SuspiciousnessMap& susp, TieBreak tau) {
  std::vector<std::pair<double, const CodeElement*>> positive;
  for (const auto& [element, score] : susp.scores)
    if (score > 0.0) positive.emplace_back(score, &element);
  if (positive.empty())
    throw EmptyDomain("no element with positive suspiciousness");

  // Descending score; (file, line) settles the emission order of ties.
  std::sort(positive.begin(), positive.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return *a.second < *b.second;
            });

  Ranks ranks;
  size_t i = 0;
  int dense_rank = 0;
  while (i < positive.size()) {
    size_t j = i;
    while (j < positive.size() && positive[j].first == positive[i].first) ++j;
    ++dense_rank;
    const int max_rank = static_cast<int>(j);  // worst position in the group
    for (size_t k = i; k < j; ++k)
      ranks[*positive[k].second] =
          tau == TieBreak::Max ? max_rank : dense_rank;
    i = j;
  }
  return ranks;
}

}  // namespace culprit::sbfl
