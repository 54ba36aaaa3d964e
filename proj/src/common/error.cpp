#include "paretoaro/common/error.hpp"

namespace paretoaro {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kInvalidBound: return "InvalidBound";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kUnsupportedRegion: return "UnsupportedRegion";
    case ErrorCode::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::kUnsupportedShape: return "UnsupportedShape";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kIncompatiblePlan: return "IncompatiblePlan";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kBadStatus: return "BadStatus";
    case ErrorCode::kBadGrid: return "BadGrid";
    case ErrorCode::kNotContained: return "NotContained";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kPlanError: return "PlanError";
    case ErrorCode::kNotFound: return "NotFound";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace paretoaro
