#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wvgeom {

/// Stable error identifiers. The kebab-case name returned by error_name() is
/// part of the CLI contract and must not change.
enum class ErrorCode {
  kZeroState,
  kDimensionMismatch,
  kNotHermitian,
  kNotHermitianEffect,
  kNotUnitary,
  kNotUnit,
  kInvalidArgument,
  kOrthogonalPrePost,
  kNilImage,
  kVanishingExpectation,
  kNonConvergent,
  kVanishingOverlap,
  kDegenerateStarTriangle,
  kDegenerateTriangle,
  kAntipodalDegenerate,
  kOrthogonalEndpoints,
  kParse,
  kValidation,
};

/// Coarse grouping used to pick a process exit code.
enum class ErrorCategory { kMathDomain, kPartialGeometry, kParse, kValidation };

std::string_view error_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace wvgeom
