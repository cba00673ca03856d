#include "gnt/error.hpp"

namespace gnt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::InconsistentBinding: return "InconsistentBinding";
    case ErrorCode::QuotaInfeasible: return "QuotaInfeasible";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::LexiconConflict: return "LexiconConflict";
    case ErrorCode::InvalidEntry: return "InvalidEntry";
    case ErrorCode::InvalidLanguage: return "InvalidLanguage";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::IncompleteBatch: return "IncompleteBatch";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::StageError: return "StageError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(ErrorCode::StageError, "stage '" + stage + "' failed: " + cause.what()),
      stage_(std::move(stage)),
      cause_(cause.code()) {}

}  // namespace gnt
