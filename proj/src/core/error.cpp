#include "utri/error.hpp"

namespace utri {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateInput: return "degenerate_input";
    case ErrorCode::kInvalidCamera: return "invalid_camera";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kUndefinedProjection: return "undefined_projection";
    case ErrorCode::kInvalidPair: return "invalid_pair";
    case ErrorCode::kAmbiguousTriangulation: return "ambiguous_triangulation";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kDegenerateProjection: return "degenerate_projection";
    case ErrorCode::kNotSplittable: return "not_splittable";
    case ErrorCode::kComplexPair: return "complex_pair";
    case ErrorCode::kOffVariety: return "off_variety";
    case ErrorCode::kDegenerateConfiguration: return "degenerate_configuration";
    case ErrorCode::kInconsistentData: return "inconsistent_data";
    case ErrorCode::kUnsupportedConfiguration: return "unsupported_configuration";
    case ErrorCode::kPreconditionViolation: return "precondition_violation";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kUnreliableRank: return "unreliable_rank";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kAssertion: return "assertion";
  }
  return "unknown";
}

}  // namespace utri
