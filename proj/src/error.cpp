#include "crowdbelief/error.hpp"

#include <utility>

namespace crowdbelief {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidFocal: return "invalid-focal";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kFrameMismatch: return "frame-mismatch";
    case ErrorCode::kArity: return "arity";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kUndefinedTransform: return "undefined-transform";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kMissingReference: return "missing-reference";
    case ErrorCode::kEmptyGroup: return "empty-group";
    case ErrorCode::kInvalidMass: return "invalid-mass";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string summarize(const std::string& source,
                      const std::vector<std::string>& issues) {
  std::string out = source + ": " + std::to_string(issues.size()) +
                    (issues.size() == 1 ? " error" : " errors");
  for (const auto& issue : issues) out += "\n  " + issue;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::string source,
                                 std::vector<std::string> issues)
    : Error(ErrorCode::kValidation, summarize(source, issues)),
      source_(std::move(source)),
      issues_(std::move(issues)) {}

}  // namespace crowdbelief
