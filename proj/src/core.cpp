#include "culprit/core.hpp"

#include <algorithm>

#include "culprit/errors.hpp"

namespace culprit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoFailingTests: return "NoFailingTests";
    case ErrorCode::MissingHistory: return "MissingHistory";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateTestName: return "DuplicateTestName";
    case ErrorCode::VcsError: return "VcsError";
    case ErrorCode::UnknownCommit: return "UnknownCommit";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::InconsistentOracle: return "InconsistentOracle";
    case ErrorCode::FileUnavailable: return "FileUnavailable";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OracleAbort: return "OracleAbort";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidModel: return "InvalidModel";
  }
  return "Unknown";
}

std::string Error::format(ErrorCode code, const std::string& message,
                          const std::string& stage) {
  std::string out = error_code_name(code);
  if (!stage.empty()) out += " [" + stage + "]";
  out += ": " + message;
  return out;
}

void validate(const CodeElement& element) {
  if (element.file.empty())
    throw Error(ErrorCode::InvalidModel, "element has empty file path");
  if (element.line < 1)
    throw Error(ErrorCode::InvalidModel,
                "element line must be >= 1: " + element.file + ":" +
                    std::to_string(element.line));
  if (element.enclosing_span) {
    const LineSpan& span = *element.enclosing_span;
    if (!(span.begin_line <= element.line && element.line <= span.end_line))
      throw Error(ErrorCode::InvalidModel,
                  "enclosing span does not contain line: " + element.file +
                      ":" + std::to_string(element.line));
  }
}

void CoverageMatrix::add_test(TestCase test, ElementSet covered) {
  if (test.full_name.empty())
    throw Error(ErrorCode::InvalidModel, "test with empty name");
  if (covered_.count(test.full_name)) throw DuplicateTestName(test.full_name);
  for (const CodeElement& e : covered) validate(e);
  covered_.emplace(test.full_name, std::move(covered));
  tests_.push_back(std::move(test));
}

const ElementSet& CoverageMatrix::covered(const std::string& test_name) const {
  auto it = covered_.find(test_name);
  if (it == covered_.end())
    throw Error(ErrorCode::InvalidModel, "unknown test: " + test_name);
  return it->second;
}

bool CoverageMatrix::has_test(const std::string& test_name) const {
  return covered_.count(test_name) > 0;
}

std::vector<const TestCase*> CoverageMatrix::failing_tests() const {
  std::vector<const TestCase*> out;
  for (const TestCase& t : tests_)
    if (t.outcome == Outcome::Fail) out.push_back(&t);
  return out;
}

size_t CoverageMatrix::failing_count() const {
  return static_cast<size_t>(
      std::count_if(tests_.begin(), tests_.end(), [](const TestCase& t) {
        return t.outcome == Outcome::Fail;
      }));
}

ElementSet CoverageMatrix::all_elements() const {
  ElementSet out;
  for (const auto& [name, elems] : covered_) out.insert(elems.begin(), elems.end());
  return out;
}

void EvolveMap::set_history(const CodeElement& element,
                            std::vector<CommitRef> history) {
  validate(element);
  for (size_t i = 0; i < history.size(); ++i) {
    if (i > 0 && !(history[i - 1].key > history[i].key))
      throw Error(ErrorCode::InvalidModel,
                  "history of " + element.file + ":" +
                      std::to_string(element.line) +
                      " is not strictly descending at " + history[i].id);
    auto [it, inserted] = keys_.emplace(history[i].id, history[i].key);
    if (!inserted && it->second != history[i].key)
      throw Error(ErrorCode::InvalidModel,
                  "commit " + history[i].id + " seen with two different keys");
  }
  history_[element] = std::move(history);
}

bool EvolveMap::has(const CodeElement& element) const {
  return history_.count(element) > 0;
}

const std::vector<CommitRef>& EvolveMap::history(
    const CodeElement& element) const {
  auto it = history_.find(element);
  if (it == history_.end())
    throw MissingHistory(element.file, element.line);
  return it->second;
}

bool EvolveMap::contains_pair(const std::string& commit_id,
                              const CodeElement& element) const {
  auto it = history_.find(element);
  if (it == history_.end()) return false;
  for (const CommitRef& ref : it->second)
    if (ref.id == commit_id) return true;
  return false;
}

const CommitKey& EvolveMap::key_of(const std::string& commit_id) const {
  auto it = keys_.find(commit_id);
  if (it == keys_.end()) throw UnknownCommit(commit_id);
  return it->second;
}

bool EvolveMap::knows_commit(const std::string& commit_id) const {
  return keys_.count(commit_id) > 0;
}

std::vector<CommitRef> EvolveMap::all_commits() const {
  std::vector<CommitRef> out;
  out.reserve(keys_.size());
  for (const auto& [id, key] : keys_) out.push_back(CommitRef{id, key});
  return out;
}

ElementSet suspicious_elements(const CoverageMatrix& cov) {
  bool any_fail = false;
  ElementSet ef;
  for (const TestCase& t : cov.tests()) {
    if (t.outcome != Outcome::Fail) continue;
    any_fail = true;
    const ElementSet& covered = cov.covered(t.full_name);
    ef.insert(covered.begin(), covered.end());
  }
  if (!any_fail) throw NoFailingTests("stage1");
  return ef;
}

CommitIdSet candidate_commits(const ElementSet& ef, const EvolveMap& ev) {
  CommitIdSet cf;
  for (const CodeElement& e : ef) {
    const std::vector<CommitRef>& hist = ev.history(e);  // MissingHistory
    for (const CommitRef& ref : hist) cf.insert(ref.id);
  }
  return cf;
}

}  // namespace culprit
