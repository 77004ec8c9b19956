#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randpoly {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDegenerateBody,
  kDegenerateHull,
  kUnbounded,
  kUnsupported,
  kSampleNotInBody,
  kEnvelopeTooLoose,
  kNonConvergence,
  kNonConvex,
  kParse,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. The code lets callers (the CLI in particular)
/// distinguish usage problems from numerical failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace randpoly
