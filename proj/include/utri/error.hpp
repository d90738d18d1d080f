#pragma once

#include <stdexcept>
#include <string>

namespace utri {

enum class ErrorCode {
  kDegenerateInput = 1,
  kInvalidCamera,
  kOutOfRange,
  kUndefinedProjection,
  kInvalidPair,
  kAmbiguousTriangulation,
  kShape,
  kDegenerateProjection,
  kNotSplittable,
  kComplexPair,
  kOffVariety,
  kDegenerateConfiguration,
  kInconsistentData,
  kUnsupportedConfiguration,
  kPreconditionViolation,
  kBudgetExceeded,
  kUnreliableRank,
  kParse,
  kAssertion,
};

const char* error_code_name(ErrorCode code);

/// Every failure in the library surfaces as this exception type. Triangulation
/// errors additionally carry the measured kernel dimension (-1 when unknown).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int kernel_dim = -1)
      : std::runtime_error(message), code_(code), kernel_dim_(kernel_dim) {}

  ErrorCode code() const { return code_; }
  int kernel_dim() const { return kernel_dim_; }

 private:
  ErrorCode code_;
  int kernel_dim_;
};

}  // namespace utri
