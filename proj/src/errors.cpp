#include "wvgeom/errors.hpp"

namespace wvgeom {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroState: return "zero-state";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kNotHermitian: return "not-hermitian";
    case ErrorCode::kNotHermitianEffect: return "not-hermitian-effect";
    case ErrorCode::kNotUnitary: return "not-unitary";
    case ErrorCode::kNotUnit: return "not-unit";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kOrthogonalPrePost: return "orthogonal-pre-post";
    case ErrorCode::kNilImage: return "nil-image";
    case ErrorCode::kVanishingExpectation: return "vanishing-expectation";
    case ErrorCode::kNonConvergent: return "non-convergent";
    case ErrorCode::kVanishingOverlap: return "vanishing-overlap";
    case ErrorCode::kDegenerateStarTriangle: return "degenerate-star-triangle";
    case ErrorCode::kDegenerateTriangle: return "degenerate-triangle";
    case ErrorCode::kAntipodalDegenerate: return "antipodal-degenerate";
    case ErrorCode::kOrthogonalEndpoints: return "orthogonal-endpoints";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kValidation: return "validation-error";
  }
  return "unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return ErrorCategory::kParse;
    case ErrorCode::kDegenerateStarTriangle:
      return ErrorCategory::kPartialGeometry;
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNotHermitian:
    case ErrorCode::kNotUnitary:
    case ErrorCode::kNotUnit:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kValidation:
    case ErrorCode::kZeroState:
      return ErrorCategory::kValidation;
    default:
      return ErrorCategory::kMathDomain;
  }
}

}  // namespace wvgeom
