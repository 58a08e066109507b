#pragma once

/*
    Coverage ingestion. Two input formats:

    MATRIX_JSON (canonical):
      {"tests":[{"name":str,"outcome":"PASS"|"FAIL",
                 "covered":[["path",line], ...]}, ...]}
      A covered entry may also be ["path", line, span_begin, span_end] to
      carry the enclosing-method span when the collector knows it.

    LCOV_PER_TEST: a directory of <testname>.lcov records plus an
    outcomes.tsv file with one `name<TAB>PASS|FAIL` row per test.
*/

#include <filesystem>
#include <string>

#include "culprit/types.hpp"

namespace culprit::coverage {

enum class Format { MatrixJson, LcovPerTest };

struct CoverageFile {
  std::filesystem::path path;
  Format format = Format::MatrixJson;  // declared by the caller, never sniffed
};

// Throws ParseError / DuplicateTestName.
CoverageMatrix load_coverage(const CoverageFile& file);

CoverageMatrix parse_matrix_json(const std::string& text,
                                 const std::string& origin);

// Keeps every failing test, plus each passing test whose full name contains
// the file stem of at least one element covered by a failing test.
// Idempotent. Throws NoFailingTests.
CoverageMatrix select_relevant_tests(const CoverageMatrix& cov);

// File stems of everything covered by failing tests; exposed for reporting.
std::set<std::string> failing_covered_class_names(const CoverageMatrix& cov);

}  // namespace culprit::coverage
