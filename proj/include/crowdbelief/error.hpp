#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crowdbelief {

enum class ErrorCode {
  kInvalidFocal,
  kRange,
  kFrameMismatch,
  kArity,
  kCapacity,
  kUndefinedTransform,
  kDomain,
  kMissingReference,
  kEmptyGroup,
  kInvalidMass,
  kParse,
  kValidation,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by ingestion after every bad row has been collected. Each entry of
// issues() is already addressed as "<file>:<line>: <message>".
class ValidationError : public Error {
 public:
  ValidationError(std::string source, std::vector<std::string> issues);

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::string source_;
  std::vector<std::string> issues_;
};

}  // namespace crowdbelief
