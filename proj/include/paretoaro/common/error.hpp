#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paretoaro {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kSolverFailure,
  kNumericalBreakdown,
  kInvalidBound,
  kEmptyRegion,
  kUnsupportedRegion,
  kUnsupportedDimension,
  kUnsupportedShape,
  kUnsupported,
  kIncompatiblePlan,
  kInfeasible,
  kBadStatus,
  kBadGrid,
  kNotContained,
  kParseError,
  kPlanError,
  kNotFound,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace paretoaro
