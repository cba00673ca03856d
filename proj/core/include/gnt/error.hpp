#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gnt {

enum class ErrorCode {
  MissingBinding,
  InconsistentBinding,
  QuotaInfeasible,
  InvalidManifest,
  LexiconConflict,
  InvalidEntry,
  InvalidLanguage,
  EmptySelection,
  InvalidThreshold,
  ParseError,
  DuplicateRecord,
  IncompleteBatch,
  BackendUnavailable,
  ProtocolViolation,
  InvalidConfig,
  IoError,
  StageError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is a gnt::Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Wraps a component failure with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }
  ErrorCode cause() const noexcept { return cause_; }

 private:
  std::string stage_;
  ErrorCode cause_;
};

}  // namespace gnt
