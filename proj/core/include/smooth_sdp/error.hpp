#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smooth_sdp {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kNotTangent,
  kRetractionFailure,
  kUnsupportedConstraints,
  kRankDeficient,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. All library failures that the
/// contracts call "structured errors" are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kNotTangent: return "not tangent";
    case ErrorCode::kRetractionFailure: return "retraction failure";
    case ErrorCode::kUnsupportedConstraints: return "unsupported constraints";
    case ErrorCode::kRankDeficient: return "rank deficient";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown";
}

}  // namespace smooth_sdp
