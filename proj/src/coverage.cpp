#include "culprit/coverage.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "culprit/errors.hpp"

namespace culprit::coverage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome parse_outcome(const std::string& text, const std::string& origin) {
  if (text == "PASS") return Outcome::Pass;
  if (text == "FAIL") return Outcome::Fail;
  throw ParseError("outcome must be PASS or FAIL, got '" + text + "'", origin);
}

CodeElement parse_covered_entry(const json& entry, const std::string& origin) {
  if (!entry.is_array() || (entry.size() != 2 && entry.size() != 4))
    throw ParseError("covered entry must be [path,line] or [path,line,begin,end]",
                     origin);
  if (!entry[0].is_string() || !entry[1].is_number_integer())
    throw ParseError("covered entry must be [string,int,...]", origin);
  CodeElement e{entry[0].get<std::string>(), entry[1].get<int>(), std::nullopt};
  if (entry.size() == 4) {
    if (!entry[2].is_number_integer() || !entry[3].is_number_integer())
      throw ParseError("span bounds must be integers", origin);
    e.enclosing_span = LineSpan{entry[2].get<int>(), entry[3].get<int>()};
  }
  try {
    validate(e);
  } catch (const Error& err) {
    throw ParseError(err.what(), origin);
  }
  return e;
}

CoverageMatrix load_lcov_per_test(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw ParseError("LCOV_PER_TEST input must be a directory", dir.string());

  const fs::path outcomes_path = dir / "outcomes.tsv";
  std::ifstream outcomes(outcomes_path);
  if (!outcomes) throw ParseError("missing outcomes.tsv", dir.string());

  std::map<std::string, Outcome> outcome_of;
  std::string line;
  int lineno = 0;
  while (std::getline(outcomes, line)) {
    ++lineno;
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("expected name<TAB>PASS|FAIL",
                       outcomes_path.string() + ":" + std::to_string(lineno));
    std::string name = line.substr(0, tab);
    if (outcome_of.count(name)) throw DuplicateTestName(name);
    outcome_of[name] = parse_outcome(
        line.substr(tab + 1),
        outcomes_path.string() + ":" + std::to_string(lineno));
  }

  // Directory iteration order is unspecified; collect and sort for a
  // deterministic matrix.
  std::vector<fs::path> records;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".lcov") records.push_back(entry.path());
  }
  std::sort(records.begin(), records.end());

  CoverageMatrix matrix;
  for (const fs::path& record : records) {
    const std::string test_name = record.stem().string();
    auto it = outcome_of.find(test_name);
    if (it == outcome_of.end())
      throw ParseError("test '" + test_name + "' has no outcomes.tsv row",
                       record.string());

    ElementSet covered;
    std::ifstream in(record);
    std::string current_file;
    std::string row;
    int rowno = 0;
    while (std::getline(in, row)) {
      ++rowno;
      if (!row.empty() && row.back() == '\r') row.pop_back();
      const std::string origin = record.string() + ":" + std::to_string(rowno);
      if (row.rfind("SF:", 0) == 0) {
        current_file = row.substr(3);
      } else if (row.rfind("DA:", 0) == 0) {
        if (current_file.empty())
          throw ParseError("DA record before SF record", origin);
        size_t comma = row.find(',', 3);
        if (comma == std::string::npos)
          throw ParseError("DA record needs line,hits", origin);
        int da_line = 0, hits = 0;
        try {
          da_line = std::stoi(row.substr(3, comma - 3));
          hits = std::stoi(row.substr(comma + 1));
        } catch (const std::exception&) {
          throw ParseError("DA record needs integer line,hits", origin);
        }
        if (hits > 0) covered.insert(CodeElement{current_file, da_line, {}});
      } else if (row == "end_of_record") {
        current_file.clear();
      }
      // Other LCOV record kinds (FN, BRDA, ...) carry no statement
      // coverage and are skipped.
    }
    matrix.add_test(TestCase{test_name, it->second}, std::move(covered));
  }
  return matrix;
}

}  // namespace

CoverageMatrix parse_matrix_json(const std::string& text,
                                 const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), origin);
  }
  if (!doc.is_object() || !doc.contains("tests") || !doc["tests"].is_array())
    throw ParseError("top level must be {\"tests\": [...]}", origin);

  CoverageMatrix matrix;
  for (const json& t : doc["tests"]) {
    if (!t.is_object() || !t.contains("name") || !t.contains("outcome") ||
        !t.contains("covered"))
      throw ParseError("test entry needs name/outcome/covered", origin);
    TestCase test;
    test.full_name = t["name"].get<std::string>();
    test.outcome = parse_outcome(t["outcome"].get<std::string>(),
                                 origin + ", test " + test.full_name);
    ElementSet covered;
    for (const json& entry : t["covered"])
      covered.insert(
          parse_covered_entry(entry, origin + ", test " + test.full_name));
    matrix.add_test(std::move(test), std::move(covered));
  }
  return matrix;
}

CoverageMatrix load_coverage(const CoverageFile& file) {
  switch (file.format) {
    case Format::MatrixJson:
      return parse_matrix_json(read_file(file.path), file.path.string());
    case Format::LcovPerTest:
      return load_lcov_per_test(file.path);
  }
  throw ParseError("unknown coverage format", file.path.string());
}

std::set<std::string> failing_covered_class_names(const CoverageMatrix& cov) {
  std::set<std::string> names;
  for (const TestCase& t : cov.tests()) {
    if (t.outcome != Outcome::Fail) continue;
    for (const CodeElement& e : cov.covered(t.full_name)) {
      std::string stem = fs::path(e.file).stem().string();
      if (!stem.empty()) names.insert(std::move(stem));
    }
  }
  return names;
}

CoverageMatrix select_relevant_tests(const CoverageMatrix& cov) {
  if (cov.failing_count() == 0) throw NoFailingTests("relevant-test-selection");
  const std::set<std::string> class_names = failing_covered_class_names(cov);

  CoverageMatrix selected;
  for (const TestCase& t : cov.tests()) {
    bool keep = t.outcome == Outcome::Fail;
    if (!keep) {
      for (const std::string& name : class_names) {
        if (t.full_name.find(name) != std::string::npos) {
          keep = true;
          break;
        }
      }
    }
    if (keep) selected.add_test(t, cov.covered(t.full_name));
  }
  return selected;
}

}  // namespace culprit::coverage
