#pragma once

#include <stdexcept>
#include <string>

namespace culprit {

enum class ErrorCode {
  NoFailingTests,
  MissingHistory,
  ParseError,
  DuplicateTestName,
  VcsError,
  UnknownCommit,
  EmptyDomain,
  EmptySpace,
  InconsistentOracle,
  FileUnavailable,
  EmptyInput,
  OracleAbort,
  ConfigError,
  InvalidModel,
};

const char* error_code_name(ErrorCode code);

// Base for all pipeline errors. `stage` names the pipeline stage that
// raised the error; empty when raised outside a stage.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string stage = {})
      : std::runtime_error(format(code, message, stage)),
        code_(code),
        stage_(std::move(stage)) {}

  ErrorCode code() const { return code_; }
  const std::string& stage() const { return stage_; }

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            const std::string& stage);

  ErrorCode code_;
  std::string stage_;
};

struct NoFailingTests : Error {
  explicit NoFailingTests(std::string stage = {})
      : Error(ErrorCode::NoFailingTests, "coverage contains no failing test",
              std::move(stage)) {}
};

struct MissingHistory : Error {
  explicit MissingHistory(const std::string& file, int line)
      : Error(ErrorCode::MissingHistory,
              "no change history entry for element " + file + ":" +
                  std::to_string(line)) {}
};

struct ParseError : Error {
  ParseError(const std::string& what, const std::string& where)
      : Error(ErrorCode::ParseError, what + " (" + where + ")") {}
};

struct DuplicateTestName : Error {
  explicit DuplicateTestName(const std::string& name)
      : Error(ErrorCode::DuplicateTestName, "duplicate test name: " + name) {}
};

struct VcsError : Error {
  explicit VcsError(std::string message)
      : Error(ErrorCode::VcsError, std::move(message)) {}
};

struct UnknownCommit : Error {
  explicit UnknownCommit(const std::string& rev)
      : Error(ErrorCode::UnknownCommit, "unknown commit: " + rev) {}
};

struct EmptyDomain : Error {
  explicit EmptyDomain(std::string message)
      : Error(ErrorCode::EmptyDomain, std::move(message)) {}
};

struct EmptySpace : Error {
  explicit EmptySpace(std::string message)
      : Error(ErrorCode::EmptySpace, std::move(message)) {}
};

struct InconsistentOracle : Error {
  explicit InconsistentOracle(std::string message)
      : Error(ErrorCode::InconsistentOracle, std::move(message)) {}
};

struct FileUnavailable : Error {
  FileUnavailable(const std::string& commit, const std::string& path)
      : Error(ErrorCode::FileUnavailable,
              "cannot materialize " + path + " around commit " + commit) {}
};

struct EmptyInput : Error {
  explicit EmptyInput(std::string message)
      : Error(ErrorCode::EmptyInput, std::move(message)) {}
};

struct OracleAbort : Error {
  explicit OracleAbort(std::string message)
      : Error(ErrorCode::OracleAbort, std::move(message)) {}
};

struct ConfigError : Error {
  explicit ConfigError(std::string message)
      : Error(ErrorCode::ConfigError, std::move(message)) {}
};

}  // namespace culprit
